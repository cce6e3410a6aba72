//! Binary representation counts `r(n) = #{(a, b) ∈ A × B : a + b = n}` and
//! their main-term predictions.

use num_complex::Complex64;

use crate::conv;
use crate::error::{invalid, Error, Result};
use crate::num::{self, gcd, CompensatedComplexSum};
use crate::setgen::IntegerSet;
use crate::spectrum::{arc_coefficient, local_densities};

/// Sum length above which the exact NTT replaces the floating transform.
const FFT_SUM_LIMIT: u64 = 1 << 22;

/// Ordered-pair counts `r(n)` for `n = 0..=A.limit + B.limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    r: Vec<u64>,
}

impl RepCountTable {
    pub fn get(&self, n: u64) -> u64 {
        self.r.get(n as usize).copied().unwrap_or(0)
    }

    /// Largest `n` with a stored count (`A.limit + B.limit`).
    pub fn max_n(&self) -> u64 {
        self.r.len() as u64 - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.r
    }

    pub fn total(&self) -> u64 {
        self.r.iter().sum()
    }
}

pub fn rep_count(a: &IntegerSet, b: &IntegerSet) -> Result<RepCountTable> {
    let (ia, ib) = (a.indicator(), b.indicator());
    let r = if a.limit() + b.limit() <= FFT_SUM_LIMIT {
        conv::convolve_fft(&ia, &ib)?
    } else {
        conv::convolve_ntt(&ia, &ib)
    };
    Ok(RepCountTable { r })
}

/// Enumeration of all pairs; the reference for [`rep_count`].
pub fn rep_count_direct(a: &IntegerSet, b: &IntegerSet) -> RepCountTable {
    let mut r = vec![0u64; (a.limit() + b.limit() + 1) as usize];
    let bv = b.to_vec();
    for x in a.iter() {
        for &y in &bv {
            r[(x + y) as usize] += 1;
        }
    }
    RepCountTable { r }
}

/// `n / sqrt(6)`, the predicted count for `n = [√2 a] + [√3 b]`.
pub fn beatty_main_term(n: u64) -> f64 {
    n as f64 / 6f64.sqrt()
}

/// Arc coefficients `c(a/q) = Σ_b f(q, b) e(ab/q)` for all reduced `a/q`
/// with `q <= Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcCoefficients {
    q_max: u64,
    entries: Vec<(u64, u64, Complex64)>,
}

impl ArcCoefficients {
    pub fn from_fn(q_max: u64, coef: impl Fn(u64, u64) -> Complex64) -> Self {
        let mut entries = Vec::new();
        for q in 1..=q_max {
            for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
                entries.push((q, a, coef(q, a)));
            }
        }
        Self { q_max, entries }
    }

    /// Empirical coefficients from the residue counts of a set.
    pub fn from_set(set: &IntegerSet, q_max: u64) -> Result<Self> {
        let mut entries = Vec::new();
        for q in 1..=q_max {
            let t = local_densities(set, q)?;
            for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
                entries.push((q, a, arc_coefficient(&t, a as i64)?));
            }
        }
        Ok(Self { q_max, entries })
    }

    pub fn q_max(&self) -> u64 {
        self.q_max
    }

    /// `(q, a, c(a/q))` triples ordered by `q` then `a`.
    pub fn entries(&self) -> &[(u64, u64, Complex64)] {
        &self.entries
    }
}

/// Major-arc prediction with the imaginary residual kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTerm {
    pub value: f64,
    pub imag_residual: f64,
}

/// `n Σ_{q <= Q} Σ_{(a,q)=1} c_A(a/q) c_B(a/q) e(-na/q)`.
pub fn rational_main_term(ta: &ArcCoefficients, tb: &ArcCoefficients, n: u64) -> Result<MainTerm> {
    if ta.q_max != tb.q_max {
        return invalid(format!(
            "coefficient tables cover Q = {} and Q = {}",
            ta.q_max, tb.q_max
        ));
    }
    let mut acc = CompensatedComplexSum::new();
    for (&(q, a, ca), &(_, _, cb)) in ta.entries.iter().zip(&tb.entries) {
        acc.add(ca * cb * num::e_rational(-(n as i128) * a as i128, q));
    }
    let s = acc.value() * n as f64;
    Ok(MainTerm {
        value: s.re,
        imag_residual: s.im,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: u64,
    pub r: u64,
    pub main_term: f64,
    pub ratio: f64,
}

/// Per-`n` ratios `r(n) / main(n)` over a window, with summary statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub rows: Vec<ReportRow>,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Compare exact counts with a main term over `window`.
///
/// Every `n` in the window must satisfy `1 <= n <= min(A.limit, B.limit)`
/// so truncation does not cut off representations, and the main term must
/// be positive there.
pub fn asymptotic_report(
    a: &IntegerSet,
    b: &IntegerSet,
    main_term: impl Fn(u64) -> f64,
    window: impl IntoIterator<Item = u64>,
) -> Result<AsymptoticReport> {
    let table = rep_count(a, b)?;
    report_from_table(&table, a.limit().min(b.limit()), main_term, window)
}

pub fn report_from_table(
    table: &RepCountTable,
    n_max: u64,
    main_term: impl Fn(u64) -> f64,
    window: impl IntoIterator<Item = u64>,
) -> Result<AsymptoticReport> {
    let mut rows = Vec::new();
    for n in window {
        if n == 0 || n > n_max {
            return invalid(format!("n = {n} outside the untruncated range [1, {n_max}]"));
        }
        let m = main_term(n);
        if !(m > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "main term {m} at n = {n} is not positive"
            )));
        }
        let r = table.get(n);
        rows.push(ReportRow {
            n,
            r,
            main_term: m,
            ratio: r as f64 / m,
        });
    }
    if rows.is_empty() {
        return invalid("empty window");
    }
    let mean = rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64;
    let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(AsymptoticReport {
        rows,
        mean,
        min,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setgen::{gen_beatty, gen_kfree, gen_periodic};

    #[test]
    fn rep_count_examples() {
        let one = IntegerSet::from_members(1, [1]).unwrap();
        let t = rep_count(&one, &one).unwrap();
        assert_eq!(t.values(), &[0, 0, 1]);

        let sf = gen_kfree(2, 50).unwrap();
        assert_eq!(rep_count(&sf, &sf).unwrap().get(4), 3);

        let b2 = gen_beatty(2, 20).unwrap();
        let b3 = gen_beatty(3, 20).unwrap();
        let t = rep_count(&b2, &b3).unwrap();
        assert_eq!(t.get(12), 5);
        let pairs: Vec<(u64, u64)> = b2
            .iter()
            .filter(|&a| a < 12 && b3.contains(12 - a))
            .map(|a| (a, 12 - a))
            .collect();
        assert_eq!(pairs, vec![(2, 10), (4, 8), (7, 5), (9, 3), (11, 1)]);
    }

    #[test]
    fn rep_count_invariants() {
        let a = gen_kfree(2, 3000).unwrap();
        let b = gen_beatty(3, 2000).unwrap();
        let t = rep_count(&a, &b).unwrap();
        assert_eq!(t.total(), a.count() * b.count());
        assert_eq!(t, rep_count(&b, &a).unwrap());
        assert_eq!(t, rep_count_direct(&a, &b));
        assert_eq!(t.get(0) + t.get(1), 0);
        assert_eq!(t.max_n(), 5000);
    }

    #[test]
    fn main_terms() {
        assert_eq!(beatty_main_term(0), 0.0);
        assert!((beatty_main_term(12) - 4.898979485566356).abs() < 1e-12);
        assert!((beatty_main_term(100_000) - 40824.8290463863).abs() < 1e-6);

        let full = IntegerSet::full(200).unwrap();
        let t = ArcCoefficients::from_set(&full, 1).unwrap();
        let m = rational_main_term(&t, &t, 150).unwrap();
        assert!((m.value - 150.0).abs() < 1e-9);
        assert_eq!(rep_count(&full, &full).unwrap().get(150), 149);
    }

    #[test]
    fn odds_main_term_matches_enumeration() {
        let odds = gen_periodic(2, &[1], 200).unwrap();
        let t = ArcCoefficients::from_set(&odds, 2).unwrap();
        let (_, _, c) = t.entries()[1];
        assert!((c - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
        let reps = rep_count_direct(&odds, &odds);
        for n in (2..=100).step_by(2) {
            let m = rational_main_term(&t, &t, n).unwrap();
            assert!((m.value - n as f64 / 2.0).abs() < 1e-9);
            assert!(m.imag_residual.abs() < 1e-9);
            assert_eq!(reps.get(n), n / 2);
        }
        let rep = asymptotic_report(&odds, &odds, |n| n as f64 / 2.0, (2..=100).step_by(2)).unwrap();
        assert!(rep.rows.iter().all(|r| r.ratio == 1.0));
    }

    #[test]
    fn mismatched_tables_rejected() {
        let full = IntegerSet::full(100).unwrap();
        let t1 = ArcCoefficients::from_set(&full, 1).unwrap();
        let t2 = ArcCoefficients::from_set(&full, 2).unwrap();
        assert!(rational_main_term(&t1, &t2, 10).is_err());
    }

    #[test]
    fn report_examples() {
        let full = IntegerSet::full(300).unwrap();
        let rep = asymptotic_report(&full, &full, |n| n as f64, 100..=200).unwrap();
        assert!(rep.mean >= 0.99 && rep.mean < 1.0);
        assert!(rep.rows.iter().all(|r| r.ratio == (r.n - 1) as f64 / r.n as f64));
        assert!(asymptotic_report(&full, &full, |n| n as f64, 100..100).is_err());
        assert!(asymptotic_report(&full, &full, |n| n as f64, 250..=301).is_err());
    }
}
