use std::collections::BTreeMap;
use std::fmt;

use crate::complex::Complex;

/// Integer Laurent polynomial in q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coefficient(&self, exp: i64) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Multiplies by q^k.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPolynomial { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let sign = if *c < 0 { "-" } else if k > 0 { "+" } else { "" };
            write!(f, "{}{sign}{}q^{e}", if k > 0 { " " } else { "" }, c.unsigned_abs())?;
        }
        Ok(())
    }
}

/// Σ_{i,j} (−1)^i dim C^{i,j} q^j in diagram degrees.
pub fn graded_euler_characteristic(cx: &Complex) -> LaurentPolynomial {
    let mut p = LaurentPolynomial::zero();
    for state in 0..1u64 << cx.crossing_count() {
        let i = state.count_ones() as i64;
        let c = cx.circle_count(state) as u32;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        // (q + q^{-1})^c contributes binomial(c, m) at q^{c-2m}.
        let mut binom = 1i64;
        for m in 0..=c as i64 {
            p.add_term(i + c as i64 - 2 * m, sign * binom);
            binom = binom * (c as i64 - m) / (m + 1);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{pretzel_diagram, LinkDiagram};
    use crate::homology::homology_table;

    #[test]
    fn unknot() {
        let d = LinkDiagram::parse_pd("circle").unwrap();
        let p = graded_euler_characteristic(&Complex::new(&d));
        assert_eq!(p, LaurentPolynomial::monomial(1, 1).add(&LaurentPolynomial::monomial(-1, 1)));
    }

    #[test]
    fn chain_and_homology_levels_agree() {
        let d = pretzel_diagram(2, 3).unwrap();
        let cx = Complex::new(&d);
        assert_eq!(graded_euler_characteristic(&cx), homology_table(&cx).euler_characteristic());
    }

    #[test]
    fn chain_level_counts_basis() {
        let d = pretzel_diagram(2, 2).unwrap();
        let cx = Complex::new(&d);
        let p = graded_euler_characteristic(&cx);
        for j in cx.quantum_degrees() {
            let direct: i64 = (0..=4).map(|i| if i % 2 == 0 { 1 } else { -1 } * cx.basis(i, j).len() as i64).sum();
            assert_eq!(p.coefficient(j), direct);
        }
    }
}
