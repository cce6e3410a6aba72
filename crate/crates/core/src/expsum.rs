//! The exponential sum `S(θ) = Σ_{n ∈ N, n <= x} e(θn)` and its L² energy
//! over arc systems.
//!
//! Energies are computed in closed form from the autocorrelation `c(h)`:
//! `|S(θ)|² = c(0) + 2 Σ_{h>=1} c(h) cos(2πhθ)`, so that
//! `∫_u^v |S|² = c(0)(v - u) + F(v) - F(u)` with
//! `F(t) = Σ_{h>=1} c(h) sin(2πht) / (πh)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arcs::ArcSystem;
use crate::conv;
use crate::error::{invalid, Error, Result};
use crate::freq::Frequency;
use crate::num::{self, CompensatedComplexSum, CompensatedSum};
use crate::setgen::IntegerSet;

/// Largest truncation handled by the floating transform.
pub const FFT_LIMIT: u64 = 1 << 20;
/// Truncations up to this size are cross-checked against the bit-vector method.
pub const BITSET_CHECK_LIMIT: u64 = 1 << 14;

/// Relative slack allowed on `0 <= energy <= c(0)`.
const ENERGY_SLACK: f64 = 1e-9;

/// `S(θ)` with compensated summation.
pub fn eval_s(set: &IntegerSet, theta: f64) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    for n in set.iter() {
        acc.add(num::e(num::frac_mul(n, theta)));
    }
    acc.value()
}

/// `S(β)` at an exactly represented frequency.
pub fn eval_s_at(set: &IntegerSet, beta: &Frequency) -> Complex64 {
    let mut acc = CompensatedComplexSum::new();
    match *beta {
        Frequency::Rational { num, den } if den <= 1 << 16 => {
            let table: Vec<Complex64> = (0..den).map(|b| num::e_rational(b as i128, den)).collect();
            for n in set.iter() {
                acc.add(table[(num as u128 * n as u128 % den as u128) as usize]);
            }
        }
        _ => {
            for n in set.iter() {
                acc.add(beta.phase(n));
            }
        }
    }
    acc.value()
}

/// `c(h) = #{ n : n, n + h ∈ N ∩ [1, x] }` for `h = 0..x-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Autocorrelation {
    x: u64,
    c: Vec<u64>,
}

impl Autocorrelation {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn values(&self) -> &[u64] {
        &self.c
    }

    pub fn get(&self, h: usize) -> u64 {
        self.c.get(h).copied().unwrap_or(0)
    }
}

pub fn autocorrelation(set: &IntegerSet) -> Result<Autocorrelation> {
    let ind = set.indicator();
    let c = if set.limit() <= FFT_LIMIT {
        conv::autocorrelate_fft(&ind[1..])?
    } else {
        conv::autocorrelate_ntt(&ind[1..])
    };
    if set.limit() <= BITSET_CHECK_LIMIT {
        let exact = autocorrelation_bitset(set);
        if exact.c != c {
            return Err(Error::Precision(
                "transform autocorrelation disagrees with the bit-vector count".into(),
            ));
        }
    }
    Ok(Autocorrelation { x: set.limit(), c })
}

/// Shift-and-popcount autocorrelation, `O(x² / 64)`.
pub fn autocorrelation_bitset(set: &IntegerSet) -> Autocorrelation {
    let w = set.words();
    let x = set.limit() as usize;
    let c = (0..x)
        .map(|h| {
            let (q, r) = (h / 64, h % 64);
            (0..w.len().saturating_sub(q))
                .map(|k| {
                    let lo = w[k + q] >> r;
                    let hi = if r > 0 {
                        w.get(k + q + 1).map_or(0, |&v| v << (64 - r))
                    } else {
                        0
                    };
                    (w[k] & (lo | hi)).count_ones() as u64
                })
                .sum()
        })
        .collect();
    Autocorrelation { x: x as u64, c }
}

/// `F(t) = Σ_{h>=1} c(h) sin(2πht) / (πh)`.
fn sine_series(c: &[u64], t: f64) -> f64 {
    if t == 0.0 || t == 1.0 {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    for (h, &ch) in c.iter().enumerate().skip(1) {
        if ch == 0 {
            continue;
        }
        let r = num::frac_mul(h as u64, t);
        let s = (TAU * (r - r.round())).sin();
        acc.add(ch as f64 * s / (PI * h as f64));
    }
    acc.value()
}

/// `∫_A |S(θ)|² dθ`.
pub fn energy_on_arcs(ac: &Autocorrelation, arcs: &ArcSystem) -> Result<f64> {
    if !arcs.is_normalized() {
        return invalid("arc system is not normalized");
    }
    let mut ends: Vec<f64> = arcs
        .intervals()
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let values: Vec<f64> = ends.par_iter().map(|&t| sine_series(&ac.c, t)).collect();
    let lookup = |t: f64| values[ends.binary_search_by(|e| e.total_cmp(&t)).unwrap()];

    let c0 = ac.get(0) as f64;
    let mut acc = CompensatedSum::new();
    for &(u, v) in arcs.intervals() {
        acc.add(c0 * (v - u));
        acc.add(lookup(v));
        acc.add(-lookup(u));
    }
    let energy = acc.value();
    let slack = ENERGY_SLACK * c0.max(1.0);
    if energy < -slack || energy > c0 + slack {
        return Err(Error::Precision(format!(
            "arc energy {energy} outside [0, {c0}]"
        )));
    }
    Ok(energy.clamp(0.0, c0))
}

/// `∫_{complement of M} |S|² / x`.
pub fn minor_arc_ratio(set: &IntegerSet, major: &ArcSystem) -> Result<f64> {
    minor_arc_ratio_from(&autocorrelation(set)?, major)
}

pub fn minor_arc_ratio_from(ac: &Autocorrelation, major: &ArcSystem) -> Result<f64> {
    Ok(energy_on_arcs(ac, &major.complement())? / ac.x as f64)
}
