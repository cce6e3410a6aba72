//! Local densities, Fourier coefficients, extremality sums, Besicovitch
//! distances and the prime-series diagnostics for multiplicative sets.
//!
//! Sign convention: the Fourier coefficient of `f` at `β` is
//! `⟨f, e_β⟩ = lim (1/x) Σ f(n) e(-βn)`, and trigonometric polynomials are
//! evaluated as `Σ a_ν e(β_ν n)`, so a polynomial built from coefficients
//! reproduces `f` in quadratic mean. The arc coefficient at `a/q` is
//! `Σ_b f(q, b) e(ab/q)`, the complex conjugate of `⟨f, e_{a/q}⟩`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::expsum::eval_s_at;
use crate::freq::Frequency;
use crate::num::{self, gcd, CompensatedSum};
use crate::setgen::{IntegerSet, MultiplicativeSpec};

/// Slack on Bessel's inequality for finite-`x` coefficient estimates.
pub const BESSEL_TOL: f64 = 1e-3;

/// Residue-class counts of a set modulo `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDensityTable {
    q: u64,
    x: u64,
    counts: Vec<u64>,
    rho: f64,
}

impl LocalDensityTable {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `f(q, a) = #{ n <= x : n ∈ N, n ≡ a (mod q) } / x`.
    pub fn value(&self, a: i64) -> f64 {
        let r = a.rem_euclid(self.q as i64) as usize;
        self.counts[r] as f64 / self.x as f64
    }

    /// `f(q, a)` for `a = 1..=q`.
    pub fn values(&self) -> Vec<f64> {
        (1..=self.q as i64).map(|a| self.value(a)).collect()
    }
}

pub fn local_densities(set: &IntegerSet, q: u64) -> Result<LocalDensityTable> {
    if q == 0 || q > set.limit() {
        return invalid(format!("modulus {q} outside [1, {}]", set.limit()));
    }
    let mut counts = vec![0u64; q as usize];
    for n in set.iter() {
        counts[(n % q) as usize] += 1;
    }
    Ok(LocalDensityTable {
        q,
        x: set.limit(),
        counts,
        rho: set.density(),
    })
}

/// `Σ_{b=1}^{q} f(q, b) e(ab/q)`.
pub fn arc_coefficient(table: &LocalDensityTable, a: i64) -> Result<Complex64> {
    let q = table.q;
    let ar = a.rem_euclid(q as i64) as u64;
    if gcd(ar, q) != 1 {
        return invalid(format!("a = {a} is not coprime to q = {q}"));
    }
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for b in 1..=q {
        let w = table.value(b as i64);
        if w == 0.0 {
            continue;
        }
        let z = num::e_rational(ar as i128 * b as i128, q) * w;
        re.add(z.re);
        im.add(z.im);
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// Partial sums of `Σ_q Σ_{(a,q)=1} |c(a/q) / ρ|²` for `q = 1..=Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalityCurve {
    rho: f64,
    terms: Vec<f64>,
    partial: Vec<f64>,
}

impl ExtremalityCurve {
    /// Build the curve from any arc-coefficient function `(q, a) -> c(a/q)`.
    pub fn from_coefficients(
        rho: f64,
        q_max: u64,
        coef: impl Fn(u64, u64) -> Complex64 + Sync,
    ) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::ZeroDensity);
        }
        let terms: Vec<f64> = (1..=q_max)
            .into_par_iter()
            .map(|q| {
                (1..=q)
                    .filter(|&a| gcd(a, q) == 1)
                    .map(|a| (coef(q, a) / rho).norm_sqr())
                    .collect::<CompensatedSum>()
                    .value()
            })
            .collect();
        Ok(Self::from_terms(rho, terms))
    }

    fn from_terms(rho: f64, terms: Vec<f64>) -> Self {
        let mut acc = CompensatedSum::new();
        let partial = terms
            .iter()
            .map(|&t| {
                acc.add(t);
                acc.value()
            })
            .collect();
        Self {
            rho,
            terms,
            partial,
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn q_max(&self) -> u64 {
        self.terms.len() as u64
    }

    /// Contribution of the single denominator `q`.
    pub fn term(&self, q: u64) -> f64 {
        self.terms[q as usize - 1]
    }

    /// Partial sum over denominators `<= q`.
    pub fn partial_sum(&self, q: u64) -> f64 {
        self.partial[q as usize - 1]
    }

    pub fn partial_sums(&self) -> &[f64] {
        &self.partial
    }

    pub fn total(&self) -> f64 {
        self.partial.last().copied().unwrap_or(0.0)
    }

    /// The value `1/ρ` the full series reaches for extremal sets.
    pub fn target(&self) -> f64 {
        1.0 / self.rho
    }

    pub fn gap(&self) -> f64 {
        self.target() - self.total()
    }

    /// Increment contributed by the last denominator.
    pub fn last_increment(&self) -> f64 {
        self.terms.last().copied().unwrap_or(0.0)
    }
}

/// Empirical extremality curve from exact residue counts.
///
/// Requires positive density and `Q² <= x`.
pub fn extremality_sum(set: &IntegerSet, q_max: u64) -> Result<ExtremalityCurve> {
    if set.is_empty() {
        return Err(Error::ZeroDensity);
    }
    if q_max == 0 || q_max.saturating_mul(q_max) > set.limit() {
        return invalid(format!(
            "Q = {q_max} outside [1, sqrt(x)] for x = {}",
            set.limit()
        ));
    }
    let tables = (1..=q_max)
        .into_par_iter()
        .map(|q| local_densities(set, q))
        .collect::<Result<Vec<_>>>()?;
    let rho = set.density();
    let terms = tables
        .par_iter()
        .map(|t| {
            let q = t.q();
            (1..=q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| arc_coefficient(t, a as i64).map(|c| (c / rho).norm_sqr()))
                .collect::<Result<CompensatedSum>>()
                .map(|s| s.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExtremalityCurve::from_terms(rho, terms))
}

/// Extremality curve of the k-free set from its exact limiting coefficients.
pub fn extremality_sum_kfree_theoretical(k: u32, q_max: u64) -> Result<ExtremalityCurve> {
    if k < 2 {
        return invalid(format!("k-free sets need k >= 2, got {k}"));
    }
    let rho = kfree_coefficient_oracle(k, 1);
    // the coefficient does not depend on a, so each q contributes phi(q) c_q^2
    let terms = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let c = kfree_coefficient_oracle(k, q) / rho;
            num::totient(q) as f64 * c * c
        })
        .collect();
    Ok(ExtremalityCurve::from_terms(rho, terms))
}

/// `Σ_{d >= 1, q | d^k} μ(d) / d^k`: the limiting arc coefficient of the
/// k-free numbers at every reduced `a/q`.
///
/// Evaluated through its Euler product: with `r = rad(q)` the sum is zero
/// when some `p^e ∥ q` has `e > k`, and otherwise equals
/// `μ(r) r^{-k} ζ(k)^{-1} Π_{p | q} (1 - p^{-k})^{-1}`.
pub fn kfree_coefficient_oracle(k: u32, q: u64) -> f64 {
    assert!(k >= 2, "k-free coefficient needs k >= 2");
    assert!(q >= 1, "modulus must be positive");
    let factors = num::factorize(q);
    if factors.iter().any(|&(_, e)| e > k) {
        return 0.0;
    }
    let kf = k as f64;
    let mut v = 1.0 / num::zeta(k);
    for &(p, _) in &factors {
        let pk = (p as f64).powf(kf);
        v *= -1.0 / pk / (1.0 - 1.0 / pk);
    }
    v
}

/// Finite-`x` estimate of `⟨f, e_β⟩ = (1/x) Σ f(n) e(-βn)`.
pub fn fourier_coefficient(set: &IntegerSet, beta: &Frequency) -> Complex64 {
    eval_s_at(set, &beta.neg()) / set.limit() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub beta: Frequency,
    pub coefficient: Complex64,
    pub modulus: f64,
}

/// Fourier coefficients above a threshold, by decreasing modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub x: u64,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumEstimate {
    pub fn contains(&self, beta: &Frequency) -> bool {
        self.entries.iter().any(|e| e.beta == *beta)
    }

    pub fn get(&self, beta: &Frequency) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| e.beta == *beta)
    }

    /// `Σ |⟨f, e_β⟩|²` over the retained entries.
    pub fn mass(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.modulus * e.modulus)
            .collect::<CompensatedSum>()
            .value()
    }
}

pub fn spectrum_scan(
    set: &IntegerSet,
    candidates: &[Frequency],
    threshold: f64,
) -> Result<SpectrumEstimate> {
    if !(threshold > 0.0) {
        return invalid(format!("threshold must be positive, got {threshold}"));
    }
    let mut distinct: Vec<Frequency> = Vec::with_capacity(candidates.len());
    for c in candidates {
        if !distinct.contains(c) {
            distinct.push(*c);
        }
    }
    let all: Vec<SpectrumEntry> = distinct
        .par_iter()
        .map(|b| {
            let c = fourier_coefficient(set, b);
            SpectrumEntry {
                beta: *b,
                coefficient: c,
                modulus: c.norm(),
            }
        })
        .collect();
    let bessel: f64 = all
        .iter()
        .map(|e| e.modulus * e.modulus)
        .collect::<CompensatedSum>()
        .value();
    if bessel > set.density() + BESSEL_TOL {
        return Err(Error::Precision(format!(
            "coefficient mass {bessel} exceeds density {} (Bessel)",
            set.density()
        )));
    }
    let mut entries: Vec<SpectrumEntry> =
        all.into_iter().filter(|e| e.modulus >= threshold).collect();
    entries.sort_by(|a, b| {
        b.modulus
            .total_cmp(&a.modulus)
            .then(a.beta.value().total_cmp(&b.beta.value()))
    });
    Ok(SpectrumEstimate {
        x: set.limit(),
        entries,
    })
}

/// A finite sum `Σ a_ν e(β_ν n)` with distinct frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    terms: Vec<(Frequency, Complex64)>,
}

impl TrigPolynomial {
    pub fn new(terms: Vec<(Frequency, Complex64)>) -> Result<Self> {
        for (i, (b, _)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(c, _)| c == b) {
                return invalid(format!("frequency {b} appears twice"));
            }
        }
        Ok(Self { terms })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            terms: vec![(Frequency::zero(), Complex64::new(c, 0.0))],
        }
    }

    pub fn terms(&self) -> &[(Frequency, Complex64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, n: u64) -> Complex64 {
        self.terms.iter().map(|(b, a)| a * b.phase(n)).sum()
    }
}

/// The polynomial on the `Q` largest-modulus entries of a scan.
pub fn build_fq(coeffs: &SpectrumEstimate, q: usize) -> Result<TrigPolynomial> {
    if coeffs.entries.is_empty() {
        return invalid("spectrum estimate has no entries");
    }
    if q == 0 {
        return invalid("Q must be at least 1");
    }
    TrigPolynomial::new(
        coeffs
            .entries
            .iter()
            .take(q)
            .map(|e| (e.beta, e.coefficient))
            .collect(),
    )
}

const DIST_CHUNK: u64 = 1 << 14;

/// `((1/x) Σ_{n <= x} |f(n) - g(n)|²)^{1/2}`.
pub fn besicovitch_distance(set: &IntegerSet, g: &TrigPolynomial) -> f64 {
    // periodic phase tables for small rational denominators
    let tables: Vec<Option<(u64, Vec<Complex64>)>> = g
        .terms
        .iter()
        .map(|(b, a)| match *b {
            Frequency::Rational { num, den } if den <= 1 << 12 => Some((
                den,
                (0..den)
                    .map(|r| a * num::e_rational(num as i128 * r as i128, den))
                    .collect(),
            )),
            _ => None,
        })
        .collect();
    let eval = |n: u64| -> Complex64 {
        g.terms
            .iter()
            .zip(&tables)
            .map(|((b, a), t)| match t {
                Some((den, tab)) => tab[(n % den) as usize],
                None => a * b.phase(n),
            })
            .sum()
    };
    let x = set.limit();
    let chunks: Vec<f64> = (0..x.div_ceil(DIST_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * DIST_CHUNK + 1;
            let hi = ((c + 1) * DIST_CHUNK).min(x);
            (lo..=hi)
                .map(|n| {
                    let f = if set.contains(n) { 1.0 } else { 0.0 };
                    (eval(n) - f).norm_sqr()
                })
                .collect::<CompensatedSum>()
                .value()
        })
        .collect();
    let total: CompensatedSum = chunks.into_iter().collect();
    (total.value() / x as f64).max(0.0).sqrt()
}

/// Partial sums of `S₁ = Σ_p (f(p) - 1)/p` and `S₂ = Σ_p |f(p) - 1|²/p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WirsingSeries {
    pub prime_bound: u64,
    pub s1: f64,
    pub s2: f64,
    /// Contribution of primes in `(P/10, P]` to `S₁` and `S₂`.
    pub last_decade_s1: f64,
    pub last_decade_s2: f64,
}

pub fn wirsing_series(spec: &MultiplicativeSpec, prime_bound: u64) -> Result<WirsingSeries> {
    if prime_bound < 2 {
        return invalid(format!("prime bound must be >= 2, got {prime_bound}"));
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    let (mut d1, mut d2) = (0.0, 0.0);
    for p in num::primes_up_to(prime_bound) {
        let fp = if spec.value(p, 1) { 1.0 } else { 0.0 };
        let t1 = (fp - 1.0) / p as f64;
        let t2 = (fp - 1.0) * (fp - 1.0) / p as f64;
        s1 += t1;
        s2 += t2;
        if p * 10 > prime_bound {
            d1 += t1;
            d2 += t2;
        }
    }
    Ok(WirsingSeries {
        prime_bound,
        s1,
        s2,
        last_decade_s1: d1,
        last_decade_s2: d2,
    })
}
