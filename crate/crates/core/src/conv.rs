//! Exact integer convolutions of 0/1 indicator vectors.
//!
//! The floating FFT path rounds to the nearest integer and fails loudly when
//! any output lies farther than [`ROUNDING_LIMIT`] from an integer. The NTT
//! path works modulo a 62-bit prime and is exact while every output
//! coefficient stays below that prime.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const ROUNDING_LIMIT: f64 = 0.25;

fn round_checked(v: &[Complex64], scale: f64) -> Result<Vec<u64>> {
    let mut worst = 0.0f64;
    let out = v
        .iter()
        .map(|c| {
            let r = c.re * scale;
            let n = r.round();
            worst = worst.max((r - n).abs());
            n.max(0.0) as u64
        })
        .collect();
    if worst > ROUNDING_LIMIT {
        return Err(Error::Precision(format!(
            "transform output {worst:.3} away from an integer"
        )));
    }
    Ok(out)
}

/// `c[h] = sum_i a[i] a[i + h]` for `h` in `0..a.len()`, via `|FFT(a)|^2`.
pub fn autocorrelate_fft(a: &[u64]) -> Result<Vec<u64>> {
    let n = a.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = a
        .iter()
        .map(|&v| Complex64::new(v as f64, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();
    planner.plan_fft_forward(len).process(&mut buf);
    buf.iter_mut().for_each(|z| *z = Complex64::new(z.norm_sqr(), 0.0));
    planner.plan_fft_inverse(len).process(&mut buf);
    let mut out = round_checked(&buf[..n], 1.0 / len as f64)?;
    out.truncate(n);
    Ok(out)
}

/// Linear convolution `(a * b)[k] = sum_i a[i] b[k - i]`.
pub fn convolve_fft(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let len = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let pad = |v: &[u64]| -> Vec<Complex64> {
        v.iter()
            .map(|&x| Complex64::new(x as f64, 0.0))
            .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
            .take(len)
            .collect()
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    fa.iter_mut().zip(&fb).for_each(|(x, y)| *x *= y);
    planner.plan_fft_inverse(len).process(&mut fa);
    round_checked(&fa[..out_len], 1.0 / len as f64)
}

const NTT_MOD: u64 = 0x3a00_0000_0000_0001; // 29 * 2^57 + 1
const NTT_ROOT: u64 = 3;

fn mul_mod(a: u64, b: u64) -> u64 {
    (a as u128 * b as u128 % NTT_MOD as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(NTT_ROOT, (NTT_MOD - 1) / len as u64);
        if invert {
            w = pow_mod(w, NTT_MOD - 2);
        }
        for start in (0..n).step_by(len) {
            let mut wn = 1;
            for k in 0..len / 2 {
                let u = a[start + k];
                let v = mul_mod(a[start + k + len / 2], wn);
                a[start + k] = if u + v >= NTT_MOD { u + v - NTT_MOD } else { u + v };
                a[start + k + len / 2] = if u >= v { u - v } else { u + NTT_MOD - v };
                wn = mul_mod(wn, w);
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = pow_mod(n as u64, NTT_MOD - 2);
        a.iter_mut().for_each(|x| *x = mul_mod(*x, inv_n));
    }
}

/// Exact linear convolution modulo a 63-bit NTT prime.
pub fn convolve_ntt(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let len = out_len.next_power_of_two();
    let mut fa = a.to_vec();
    fa.resize(len, 0);
    let mut fb = b.to_vec();
    fb.resize(len, 0);
    ntt(&mut fa, false);
    ntt(&mut fb, false);
    fa.iter_mut().zip(&fb).for_each(|(x, y)| *x = mul_mod(*x, *y));
    ntt(&mut fa, true);
    fa.truncate(out_len);
    fa
}

/// Autocorrelation through [`convolve_ntt`] with the reversed input.
pub fn autocorrelate_ntt(a: &[u64]) -> Vec<u64> {
    let n = a.len();
    let rev: Vec<u64> = a.iter().rev().copied().collect();
    let full = convolve_ntt(a, &rev);
    // full[n - 1 + h] = sum_i a[i + h] a[i]
    full[n.saturating_sub(1)..].to_vec()
}

/// Quadratic reference convolution.
pub fn convolve_direct(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_convolutions_agree() {
        let a = vec![1, 0, 1, 1, 0, 0, 1];
        let b = vec![0, 1, 1, 0, 1];
        let d = convolve_direct(&a, &b);
        assert_eq!(convolve_fft(&a, &b).unwrap(), d);
        assert_eq!(convolve_ntt(&a, &b), d);
    }

    #[test]
    fn autocorrelations_agree() {
        let a = vec![0, 1, 1, 0, 1];
        let want = vec![3, 1, 1, 1, 0];
        assert_eq!(autocorrelate_fft(&a).unwrap(), want);
        assert_eq!(autocorrelate_ntt(&a), want);
    }

    #[test]
    fn ntt_handles_large_coefficients() {
        let a = vec![1u64 << 30, 3];
        let b = vec![1u64 << 28, 5];
        assert_eq!(convolve_ntt(&a, &b), vec![1u64 << 58, (5 << 30) + (3 << 28), 15]);
    }

    #[test]
    fn empty_inputs() {
        assert!(convolve_fft(&[], &[1]).unwrap().is_empty());
        assert!(convolve_ntt(&[1], &[]).is_empty());
        assert!(autocorrelate_fft(&[]).unwrap().is_empty());
    }
}
