//! Small arithmetic kernels shared by the set generators and the spectral code.

use num_complex::Complex64;
use std::f64::consts::TAU;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All primes `p <= n`, by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Smallest-prime-factor table for `0..=n` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] != 0 {
            continue;
        }
        let mut j = i;
        while j <= n {
            if spf[j] == 0 {
                spf[j] = i as u32;
            }
            j += i;
        }
    }
    spf
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Fractional part of `n * beta`, with the rounding error of the product
/// recovered by a fused multiply-add so large `n` does not lose the phase.
pub fn frac_mul(n: u64, beta: f64) -> f64 {
    let nf = n as f64;
    let hi = nf * beta;
    let lo = nf.mul_add(beta, -hi);
    let f = (hi - hi.floor()) + lo;
    let f = f - f.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// `e(t) = exp(2 pi i t)`; `t` is reduced into `[-1/2, 1/2)` first.
pub fn e(t: f64) -> Complex64 {
    let r = t - t.round();
    let (s, c) = (TAU * r).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` with the reduction done in exact integer arithmetic.
pub fn e_rational(num: i128, den: u64) -> Complex64 {
    let d = den as i128;
    let r = num.rem_euclid(d);
    e(r as f64 / den as f64)
}

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Riemann zeta at an integer `s >= 2`, by Euler-Maclaurin summation.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta({s}) diverges");
    const N: f64 = 16.0;
    // B_2j / (2j)!
    const BERNOULLI_OVER_FACT: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let sf = s as f64;
    let mut acc: CompensatedSum = (1..16).map(|n| (n as f64).powf(-sf)).collect();
    acc.add(N.powf(1.0 - sf) / (sf - 1.0));
    acc.add(0.5 * N.powf(-sf));
    // rising factorial s (s+1) ... (s+2j-2)
    let mut rising = sf;
    for (j, c) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let j = j as f64 + 1.0;
        acc.add(c * rising * N.powf(-sf - 2.0 * j + 1.0));
        rising *= (sf + 2.0 * j - 1.0) * (sf + 2.0 * j);
    }
    acc.value()
}

/// Format a real with 17 significant digits in plain decimal notation.
pub fn fmt_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if !(-20..=20).contains(&mag) {
        return format!("{v:.16e}");
    }
    let decimals = (16 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn primes_and_factors() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(totient(36), 12);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        let spf = smallest_prime_factors(50);
        assert_eq!(spf[49], 7);
        assert_eq!(spf[47], 47);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(3) - 1.2020569031595942).abs() < 1e-15);
    }

    #[test]
    fn frac_mul_large_argument() {
        let beta = std::f64::consts::FRAC_1_SQRT_2;
        let n = (1u64 << 40) + 123_457;
        // reference through u128 fixed point on the exact binary value of beta
        let bits = (beta * (1u64 << 53) as f64) as u128;
        let exact = ((bits * n as u128) & ((1u128 << 53) - 1)) as f64 / (1u64 << 53) as f64;
        assert!((frac_mul(n, beta) - exact).abs() < 1e-12);
    }

    #[test]
    fn sig17_decimal() {
        assert_eq!(fmt_sig17(0.5), "0.50000000000000000");
        assert_eq!(fmt_sig17(12.0), "12.000000000000000");
        assert_eq!(fmt_sig17(0.0), "0");
    }
}
