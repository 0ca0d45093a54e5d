//! Integral Khovanov homology of link diagrams from enhanced Kauffman
//! states, with detection of mono-circular and bipartite chord patterns and
//! explicit certificates for order-two torsion classes.

pub mod complex;
pub mod diagram;
pub mod homology;
pub mod pattern;
pub mod selftest;
pub mod torsion;
