//! Fixed inputs for the benchmarks.

use germ_core::{parse_polynomial, parse_univariate, Arc, BivariatePoly};

/// Polynomials of increasing difficulty, by name.
pub const POLYNOMIALS: [(&str, &str); 5] = [
    ("cusp", "y^2 - x^3"),
    ("e8", "y^3 - x^5"),
    ("two pairs", "(y^2 - x^3)^2 - 4*x^5*y - x^7"),
    ("sheared", "x^2 - y^3 + x*y^2"),
    ("product", "(y^2 - x^3)*(y^2 - x^5)*(y - x^2)"),
];

pub fn polynomial(src: &str) -> BivariatePoly {
    parse_polynomial(src).expect("benchmark polynomial parses")
}

pub fn arc(p: u32, y: &str) -> Arc {
    Arc::x_normalized(p, parse_univariate(y, "t").expect("benchmark arc parses")).expect("benchmark arc is valid")
}
