use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::EnhancedState;

/// A finite integer combination of enhanced states at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainVector {
    pub i: i64,
    pub j: i64,
    terms: BTreeMap<EnhancedState, i64>,
}

/// One term of a chain as written to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTerm {
    pub state: u64,
    pub minus: u64,
    pub circles: u8,
    pub coefficient: i64,
}

impl ChainVector {
    pub fn zero(i: i64, j: i64) -> Self {
        ChainVector { i, j, terms: BTreeMap::new() }
    }

    pub fn from_state(s: EnhancedState) -> Self {
        let mut v = ChainVector::zero(s.i(), s.j());
        v.add_term(s, 1);
        v
    }

    /// Adds `c·s`, dropping the entry if it cancels. Panics if `s` sits at
    /// another bidegree.
    pub fn add_term(&mut self, s: EnhancedState, c: i64) {
        assert_eq!((s.i(), s.j()), (self.i, self.j), "term outside the bidegree of the chain");
        if c == 0 {
            return;
        }
        let e = self.terms.entry(s).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&s);
        }
    }

    pub fn coefficient(&self, s: &EnhancedState) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&EnhancedState, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = ChainVector::zero(self.i, self.j);
        for (&s, &c) in &self.terms {
            out.add_term(s, c * k);
        }
        out
    }

    pub fn add(&mut self, other: &ChainVector) {
        for (&s, &c) in &other.terms {
            self.add_term(s, c);
        }
    }

    pub fn sum(&self, other: &ChainVector) -> Self {
        let mut out = self.clone();
        out.add(other);
        out
    }

    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.terms
            .iter()
            .map(|(s, &c)| ChainTerm { state: s.state, minus: s.minus, circles: s.circles, coefficient: c })
            .collect()
    }

    pub fn from_terms(i: i64, j: i64, terms: &[ChainTerm]) -> Self {
        let mut v = ChainVector::zero(i, j);
        for t in terms {
            v.add_term(EnhancedState { state: t.state, minus: t.minus, circles: t.circles }, t.coefficient);
        }
        v
    }
}

impl fmt::Display for ChainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let sep = if k > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sep}{sign}{s}")?;
            } else {
                write!(f, "{sep}{sign}{mag}{s}")?;
            }
        }
        Ok(())
    }
}
