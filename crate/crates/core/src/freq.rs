//! Frequencies on the circle `R/Z`.

use std::fmt;

use num_complex::Complex64;

use crate::num::{self, gcd};

/// Tolerance for comparing irrational (floating) frequencies.
pub const FREQ_TOL: f64 = 1e-12;

/// A point of `[0, 1)`, kept exact when it is rational.
#[derive(Debug, Clone, Copy)]
pub enum Frequency {
    /// `num / den` in lowest terms with `0 <= num < den`.
    Rational { num: u64, den: u64 },
    Real(f64),
}

impl Frequency {
    /// `a / q mod 1`, reduced.
    pub fn rational(a: i64, q: u64) -> Self {
        assert!(q > 0, "zero denominator");
        let r = (a as i128).rem_euclid(q as i128) as u64;
        let g = gcd(r, q);
        if r == 0 {
            Frequency::Rational { num: 0, den: 1 }
        } else {
            Frequency::Rational {
                num: r / g,
                den: q / g,
            }
        }
    }

    pub fn real(beta: f64) -> Self {
        let r = beta - beta.floor();
        Frequency::Real(if r >= 1.0 { 0.0 } else { r })
    }

    pub fn zero() -> Self {
        Frequency::Rational { num: 0, den: 1 }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Frequency::Rational { num, den } => num as f64 / den as f64,
            Frequency::Real(b) => b,
        }
    }

    /// `-beta mod 1`.
    pub fn neg(&self) -> Self {
        match *self {
            Frequency::Rational { num, den } => Frequency::rational(-(num as i64), den),
            Frequency::Real(b) => Frequency::real(-b),
        }
    }

    /// `e(beta * n)`, with the product reduced mod 1 before the exponential.
    pub fn phase(&self, n: u64) -> Complex64 {
        match *self {
            Frequency::Rational { num, den } => {
                num::e_rational(num as i128 * n as i128, den)
            }
            Frequency::Real(b) => num::e(num::frac_mul(n, b)),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Frequency::Rational { .. })
    }
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (
                Frequency::Rational { num: a, den: b },
                Frequency::Rational { num: c, den: d },
            ) => a == c && b == d,
            _ => {
                let d = (self.value() - other.value()).abs();
                d.min(1.0 - d) < FREQ_TOL
            }
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frequency::Rational { num, den } => write!(f, "{num}/{den}"),
            Frequency::Real(b) => write!(f, "{}", num::fmt_sig17(*b)),
        }
    }
}
