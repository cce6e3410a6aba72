//! Arc systems on the circle `[0, 1)` and the major/minor arc constructions.
//!
//! An [`ArcSystem`] is a sorted list of disjoint half-open intervals
//! `[u, v)` with `0 <= u < v <= 1`. An arc through `0` is stored as the two
//! pieces `[0, v)` and `[u, 1)`; [`ArcSystem::arc_count`] counts it once.

use crate::error::{invalid, Error, Result};
use crate::freq::Frequency;
use crate::num::{self, gcd, CompensatedSum};

/// Endpoints closer than this are merged during normalization.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ArcSystem {
    intervals: Vec<(f64, f64)>,
}

impl ArcSystem {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
        }
    }

    pub fn full() -> Self {
        Self {
            intervals: vec![(0.0, 1.0)],
        }
    }

    /// Normalize arbitrary real intervals `[u, v)`, reading them mod 1.
    pub fn from_intervals(raw: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut pieces = Vec::new();
        for (u, v) in raw {
            if !(v > u) {
                continue;
            }
            if v - u >= 1.0 {
                return Self::full();
            }
            let k = u.floor();
            let (u, v) = (u - k, v - k);
            if v <= 1.0 {
                pieces.push((u, v));
            } else {
                pieces.push((u, 1.0));
                pieces.push((0.0, v - 1.0));
            }
        }
        Self::normalize_pieces(pieces)
    }

    /// Keep intervals exactly as given; used when reading serialized systems.
    /// Energy computations reject the result unless it is normalized.
    pub fn from_raw_unchecked(intervals: Vec<(f64, f64)>) -> Self {
        Self { intervals }
    }

    fn normalize_pieces(mut pieces: Vec<(f64, f64)>) -> Self {
        pieces.retain(|&(u, v)| v > u);
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (u, v) in pieces {
            match out.last_mut() {
                Some(last) if u <= last.1 + MERGE_TOL => last.1 = last.1.max(v),
                _ => out.push((u, v)),
            }
        }
        for iv in &mut out {
            iv.0 = iv.0.clamp(0.0, 1.0);
            iv.1 = iv.1.clamp(0.0, 1.0);
            if iv.0 < MERGE_TOL {
                iv.0 = 0.0;
            }
            if iv.1 > 1.0 - MERGE_TOL {
                iv.1 = 1.0;
            }
        }
        Self { intervals: out }
    }

    pub fn normalize(&self) -> Self {
        Self::normalize_pieces(self.intervals.clone())
    }

    pub fn is_normalized(&self) -> bool {
        let inside = self
            .intervals
            .iter()
            .all(|&(u, v)| (0.0..1.0).contains(&u) && v > u && v <= 1.0);
        let separated = self
            .intervals
            .windows(2)
            .all(|w| w[1].0 > w[0].1 + MERGE_TOL);
        inside && separated
    }

    /// Arcs of half-width `half_width` centred on each point, mod 1.
    pub fn from_centers(centers: impl IntoIterator<Item = f64>, half_width: f64) -> Self {
        Self::from_intervals(
            centers
                .into_iter()
                .map(|c| (c - half_width, c + half_width)),
        )
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(u, v)| v - u)
            .collect::<CompensatedSum>()
            .value()
    }

    /// Number of arcs on the circle, with a piece ending at 1 and a piece
    /// starting at 0 counted as one wrapped arc.
    pub fn arc_count(&self) -> usize {
        let n = self.intervals.len();
        if n >= 2 && self.intervals[0].0 == 0.0 && self.intervals[n - 1].1 == 1.0 {
            n - 1
        } else {
            n
        }
    }

    /// The arc through 0 as `(u, v)` with `u` in `(0, 1)` and `v` in `(0, 1)`
    /// read mod 1, when one exists.
    pub fn wrap_arc(&self) -> Option<(f64, f64)> {
        let n = self.intervals.len();
        (n >= 2 && self.intervals[0].0 == 0.0 && self.intervals[n - 1].1 == 1.0)
            .then(|| (self.intervals[n - 1].0, self.intervals[0].1))
    }

    pub fn contains(&self, theta: f64) -> bool {
        let t = theta - theta.floor();
        self.intervals.iter().any(|&(u, v)| u <= t && t < v)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for &(u, v) in &self.intervals {
            if u > cursor {
                out.push((cursor, u));
            }
            cursor = v;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        Self::normalize_pieces(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::normalize_pieces(
            self.intervals
                .iter()
                .chain(&other.intervals)
                .copied()
                .collect(),
        )
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].0.max(b[j].0);
            let hi = a[i].1.min(b[j].1);
            if hi > lo {
                out.push((lo, hi));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalize_pieces(out)
    }

    /// Image under `theta -> 1 - theta`.
    pub fn reflect(&self) -> Self {
        Self::normalize_pieces(self.intervals.iter().map(|&(u, v)| (1.0 - v, 1.0 - u)).collect())
    }

    /// One `u v` line per interval, 17 significant digits.
    pub fn to_text(&self) -> String {
        self.intervals
            .iter()
            .map(|&(u, v)| format!("{} {}\n", num::fmt_sig17(u), num::fmt_sig17(v)))
            .collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut intervals = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut it = line.split_whitespace().map(str::parse::<f64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => intervals.push((u, v)),
                _ => return Err(Error::Format(format!("bad arc line {line:?}"))),
            }
        }
        Ok(Self::from_raw_unchecked(intervals))
    }
}

pub fn intersect_arcs(a: &ArcSystem, b: &ArcSystem) -> ArcSystem {
    a.intersect(b)
}

/// Reduced fractions `a/q` in `[0, 1)` with `q <= Q`, by denominator.
pub fn farey_centers(q_max: f64) -> Vec<Frequency> {
    let qm = q_max.floor() as u64;
    let mut out = Vec::new();
    for q in 1..=qm {
        for a in 1..=q {
            if gcd(a, q) == 1 {
                out.push(Frequency::rational(a as i64, q));
            }
        }
    }
    out
}

/// Major arcs `M(x, Q)`: half-width `Q/x` around every `a/q` with `q <= Q`.
pub fn farey_major_arcs(x: u64, q_max: f64) -> Result<ArcSystem> {
    if !(q_max >= 1.0) {
        return invalid(format!("Q must be >= 1, got {q_max}"));
    }
    if x == 0 || q_max / x as f64 >= 0.5 {
        return invalid(format!("Q/x = {q_max}/{x} must be below 1/2"));
    }
    let w = q_max / x as f64;
    Ok(ArcSystem::from_centers(
        farey_centers(q_max).iter().map(Frequency::value),
        w,
    ))
}

/// Major arcs `M_alpha(x, Q)` over the first `floor(Q)` sequence entries.
pub fn sequence_major_arcs(alpha: &[Frequency], x: u64, q_max: f64) -> Result<ArcSystem> {
    if !(q_max > 0.0) || x == 0 {
        return invalid(format!("need Q > 0 and x >= 1, got Q = {q_max}, x = {x}"));
    }
    if (alpha.len() as f64) < q_max.ceil() {
        return invalid(format!(
            "sequence has {} entries, Q = {q_max} needs {}",
            alpha.len(),
            q_max.ceil()
        ));
    }
    let take = q_max.floor() as usize;
    Ok(ArcSystem::from_centers(
        alpha[..take].iter().map(Frequency::value),
        q_max / x as f64,
    ))
}

/// `{ k / sqrt(r) mod 1 : |k| <= Q }` ordered `0, 1, -1, 2, -2, ...`.
pub fn beatty_spectrum(r: u64, q_max: f64) -> Vec<Frequency> {
    let inv = 1.0 / (r as f64).sqrt();
    let km = if q_max >= 0.0 { q_max.floor() as u64 } else { 0 };
    let mut out = vec![Frequency::zero()];
    for k in 1..=km {
        let f = num::frac_mul(k, inv);
        out.push(Frequency::real(f));
        out.push(Frequency::real(1.0 - f));
    }
    out
}

/// `M_{sqrt r}(x, Q)`: half-width `Q/x` around `k / sqrt(r) mod 1` for all
/// `|k| <= Q`.
pub fn beatty_major_arcs(r: u64, x: u64, q_max: f64) -> Result<ArcSystem> {
    if x == 0 || !(q_max > 0.0) {
        return invalid(format!("need Q > 0 and x >= 1, got Q = {q_max}, x = {x}"));
    }
    Ok(ArcSystem::from_centers(
        beatty_spectrum(r, q_max).iter().map(Frequency::value),
        q_max / x as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn farey_small() {
        let m = farey_major_arcs(100, 2.0).unwrap();
        assert_eq!(m.arc_count(), 2);
        assert!(close(m.measure(), 0.08));
        let (u, v) = m.wrap_arc().unwrap();
        assert!(close(u, 0.98) && close(v, 0.02));
        assert!(m.contains(0.5) && m.contains(0.519) && !m.contains(0.53));

        let m1 = farey_major_arcs(100, 1.0).unwrap();
        assert_eq!(m1.arc_count(), 1);
        assert!(close(m1.measure(), 0.02));

        // 1 + 1 + 2 + 2 + 4 + 2 + 6 + 4 + 6 + 4
        assert_eq!(farey_centers(10.0).len(), 32);
        assert_eq!(
            farey_centers(10.0).len() as u64,
            (1..=10).map(num::totient).sum::<u64>()
        );
    }

    #[test]
    fn farey_rejects_wide_arcs() {
        assert!(farey_major_arcs(10, 5.0).is_err());
        assert!(farey_major_arcs(100, 0.5).is_err());
    }

    #[test]
    fn sequence_arcs() {
        let m = sequence_major_arcs(&[Frequency::zero()], 100, 1.0).unwrap();
        assert_eq!(m.intervals().len(), 2);
        assert!(close(m.measure(), 0.02));
        assert!(m.contains(0.995) && m.contains(0.005));

        let alpha = beatty_spectrum(2, 3.0);
        let m = sequence_major_arcs(&alpha, 1000, 3.0).unwrap();
        assert_eq!(m.arc_count(), 3);
        for c in [0.0, 0.7071067811865476, 0.2928932188134524] {
            assert!(m.contains(c));
        }
        assert!(sequence_major_arcs(&alpha[..2], 1000, 3.0).is_err());
    }

    #[test]
    fn sequence_arcs_reproduce_farey() {
        // the same half-width 1/m on both sides: x = Q m for Farey, x' = #centers m
        let m = 2000;
        for q in [1u64, 3, 7, 12] {
            let farey = farey_major_arcs(q * m, q as f64).unwrap();
            let centers = farey_centers(q as f64);
            let n = centers.len() as u64;
            let seq = sequence_major_arcs(&centers, n * m, n as f64).unwrap();
            assert!((seq.measure() - farey.measure()).abs() < 1e-12);
            assert_eq!(seq.arc_count(), farey.arc_count());
        }
    }

    #[test]
    fn beatty_spectra() {
        let s = beatty_spectrum(2, 1.0);
        assert_eq!(s.len(), 3);
        assert!(close(s[1].value(), 0.7071067811865476));
        assert!(close(s[2].value(), 0.2928932188134524));
        assert_eq!(beatty_spectrum(2, 0.0), vec![Frequency::zero()]);
        let s3 = beatty_spectrum(3, 1.0);
        assert!(close(s3[1].value(), 0.5773502691896258));
        assert!(close(s3[2].value(), 0.4226497308103742));
    }

    #[test]
    fn complement_examples() {
        assert!(ArcSystem::full().complement().is_empty());
        let a = ArcSystem::from_intervals([(0.1, 0.3)]);
        let c = a.complement();
        assert_eq!(c.intervals(), &[(0.0, 0.1), (0.3, 1.0)]);
        let m = farey_major_arcs(100, 2.0).unwrap();
        assert!(close(m.complement().measure(), 0.92));
        assert_eq!(ArcSystem::empty().complement(), ArcSystem::full());
    }

    #[test]
    fn intersections() {
        let a = farey_major_arcs(1000, 4.0).unwrap();
        assert_eq!(intersect_arcs(&a, &ArcSystem::full()), a);
        let d1 = ArcSystem::from_intervals([(0.1, 0.2)]);
        let d2 = ArcSystem::from_intervals([(0.3, 0.4)]);
        assert!(intersect_arcs(&d1, &d2).is_empty());

        let m2 = beatty_major_arcs(2, 10_000, 5.0).unwrap();
        let m3 = beatty_major_arcs(3, 10_000, 5.0).unwrap();
        let both = intersect_arcs(&m2, &m3);
        assert_eq!(both.arc_count(), 1);
        let (u, v) = both.wrap_arc().unwrap();
        assert!(close(1.0 - u, 5e-4) && close(v, 5e-4));
    }

    #[test]
    fn beatty_centres_separated() {
        let s2 = beatty_spectrum(2, 5.0);
        let s3 = beatty_spectrum(3, 5.0);
        let min_sep = s2
            .iter()
            .skip(1)
            .flat_map(|a| s3.iter().skip(1).map(move |b| (a.value() - b.value()).abs()))
            .fold(f64::INFINITY, f64::min);
        assert!(min_sep > 2.0 * 5.0 / 1e4);
    }

    #[test]
    fn measure_monotone_and_shrinking() {
        let x = 100_000;
        let mut last = 0.0;
        for q in 1..=40 {
            let m = farey_major_arcs(x, q as f64).unwrap().measure();
            assert!(m >= last);
            last = m;
        }
        let shrink: Vec<f64> = [1_000u64, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&x| farey_major_arcs(x, 5.0).unwrap().measure())
            .collect();
        assert!(shrink.windows(2).all(|w| w[1] < w[0]));
        assert!(shrink[3] < 2e-4);
    }

    #[test]
    fn text_roundtrip_and_validation() {
        let m = farey_major_arcs(1000, 6.0).unwrap();
        let back = ArcSystem::from_text(&m.to_text()).unwrap();
        assert!(back.is_normalized());
        for (a, b) in back.intervals().iter().zip(m.intervals()) {
            assert!(close(a.0, b.0) && close(a.1, b.1));
        }
        let bad = ArcSystem::from_raw_unchecked(vec![(0.3, 0.5), (0.4, 0.6)]);
        assert!(!bad.is_normalized());
        assert!(bad.normalize().is_normalized());
        assert!(ArcSystem::from_text("0.1").is_err());
    }
}
