//! Truncated integer sets `N ∩ [1, x]` and the generators for the families
//! studied by the toolkit: k-free numbers, Beatty sets, periodic sets and
//! 0/1 multiplicative sets.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::num;

/// A finite truncation `N ∩ [1, x]` stored as a packed bit vector.
///
/// Bit `n - 1` holds membership of `n`. The element count is kept alongside
/// the bits and always equals their population count.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerSet {
    limit: u64,
    words: Vec<u64>,
    count: u64,
}

impl fmt::Debug for IntegerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntegerSet")
            .field("limit", &self.limit)
            .field("count", &self.count)
            .finish()
    }
}

fn word_len(limit: u64) -> usize {
    limit.div_ceil(64) as usize
}

impl IntegerSet {
    pub fn empty(limit: u64) -> Result<Self> {
        if limit == 0 {
            return invalid("truncation limit must be at least 1");
        }
        Ok(Self {
            limit,
            words: vec![0; word_len(limit)],
            count: 0,
        })
    }

    pub fn full(limit: u64) -> Result<Self> {
        let mut s = Self::empty(limit)?;
        s.words.iter_mut().for_each(|w| *w = !0);
        s.clear_tail();
        s.recount();
        Ok(s)
    }

    pub fn from_members(limit: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty(limit)?;
        for n in members {
            if n == 0 || n > limit {
                return invalid(format!("element {n} outside [1, {limit}]"));
            }
            s.set(n);
        }
        s.recount();
        Ok(s)
    }

    /// Build from a membership predicate evaluated on `1..=limit`.
    pub fn from_predicate(limit: u64, mut pred: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut s = Self::empty(limit)?;
        for n in 1..=limit {
            if pred(n) {
                s.set(n);
            }
        }
        s.recount();
        Ok(s)
    }

    fn set(&mut self, n: u64) {
        let i = n - 1;
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn unset(&mut self, n: u64) {
        let i = n - 1;
        self.words[(i / 64) as usize] &= !(1 << (i % 64));
    }

    fn clear_tail(&mut self) {
        let rem = self.limit % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn recount(&mut self) {
        self.count = self.words.iter().map(|w| w.count_ones() as u64).sum();
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Packed membership words; bit `n - 1` is element `n`.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Membership of `n`; `false` outside `[1, limit]`.
    pub fn contains(&self, n: u64) -> bool {
        if n == 0 || n > self.limit {
            return false;
        }
        let i = n - 1;
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi as u64 * 64;
            BitIter(w).map(move |b| base + b as u64 + 1)
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Empirical density `count / limit` at the truncation point.
    pub fn density(&self) -> f64 {
        self.count as f64 / self.limit as f64
    }

    /// The prefix `N ∩ [1, limit']`.
    pub fn truncate(&self, limit: u64) -> Result<Self> {
        if limit == 0 || limit > self.limit {
            return invalid(format!(
                "truncation point {limit} outside [1, {}]",
                self.limit
            ));
        }
        let mut s = Self {
            limit,
            words: self.words[..word_len(limit)].to_vec(),
            count: 0,
        };
        s.clear_tail();
        s.recount();
        Ok(s)
    }

    /// Indicator vector indexed by value, `v[n] = 1` iff `n` is a member,
    /// for `n` in `0..=limit`.
    pub fn indicator(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.limit as usize + 1];
        for n in self.iter() {
            v[n as usize] = 1;
        }
        v
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

const MAGIC: &[u8; 4] = b"APST";
const VERSION: u32 = 1;

impl IntegerSet {
    /// Binary form: `b"APST"`, version (u32 LE), limit (u64 LE), then the
    /// packed membership words (u64 LE each).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.words.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.limit.to_le_bytes());
        for w in &self.words {
            out.extend_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(Error::Format("missing set header".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Format(format!("unsupported set version {version}")));
        }
        let limit = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
        if limit == 0 {
            return Err(Error::Format("zero truncation limit".into()));
        }
        let body = &bytes[16..];
        if body.len() != 8 * word_len(limit) {
            return Err(Error::Format(format!(
                "expected {} payload bytes, found {}",
                8 * word_len(limit),
                body.len()
            )));
        }
        let words: Vec<u64> = body
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut s = Self {
            limit,
            words,
            count: 0,
        };
        let before = s.words.last().copied();
        s.clear_tail();
        if s.words.last().copied() != before {
            return Err(Error::Format("bits set beyond the truncation limit".into()));
        }
        s.recount();
        Ok(s)
    }

    /// Text form: a `# limit=<x> count=<c>` header then one element per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# limit={} count={}\n", self.limit, self.count);
        for n in self.iter() {
            out.push_str(&n.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty set listing".into()))?;
        let limit = header
            .split_whitespace()
            .find_map(|tok| tok.strip_prefix("limit="))
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| Error::Format(format!("bad header line {header:?}")))?;
        let members = lines
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<u64>()
                    .map_err(|_| Error::Format(format!("bad element {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_members(limit, members).map_err(|e| Error::Format(e.to_string()))
    }
}

/// A 0/1 multiplicative function given by its values on prime powers.
///
/// `rule(p, e)` is the value at `p^e`; it must be `true` at `e = 0`.
#[derive(Clone)]
pub struct MultiplicativeSpec {
    label: String,
    rule: Arc<dyn Fn(u64, u32) -> bool + Send + Sync>,
}

impl fmt::Debug for MultiplicativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("MultiplicativeSpec").field(&self.label).finish()
    }
}

impl MultiplicativeSpec {
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(u64, u32) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            rule: Arc::new(rule),
        }
    }

    /// `f(p^e) = 1` iff `e < k`.
    pub fn kfree(k: u32) -> Self {
        Self::new(format!("kfree:{k}"), move |_, e| e < k)
    }

    /// The constant function 1.
    pub fn all() -> Self {
        Self::new("all", |_, _| true)
    }

    /// `f(p^e) = 0` for `e >= 1` and every listed prime.
    pub fn excluding_primes(primes: Vec<u64>) -> Self {
        let label = format!(
            "exclude:{}",
            primes
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        Self::new(label, move |p, e| e == 0 || !primes.contains(&p))
    }

    /// `f(p^e) = 0` for `e >= 1` and every prime `p <= bound`.
    pub fn excluding_primes_up_to(bound: u64) -> Self {
        Self::new(format!("exclude-upto:{bound}"), move |p, e| {
            e == 0 || p > bound
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, p: u64, e: u32) -> bool {
        (self.rule)(p, e)
    }
}

pub fn gen_kfree(k: u32, x: u64) -> Result<IntegerSet> {
    if k < 2 {
        return invalid(format!("k-free sets need k >= 2, got {k}"));
    }
    let mut s = IntegerSet::full(x)?;
    for p in num::primes_up_to(kth_root_floor(x, k)) {
        let pk = p.pow(k);
        let mut m = pk;
        while m <= x {
            s.unset(m);
            m += pk;
        }
    }
    s.recount();
    Ok(s)
}

fn kth_root_floor(x: u64, k: u32) -> u64 {
    let mut r = (x as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= x) {
        r += 1;
    }
    r
}

/// `floor(a * sqrt(r))`, exactly.
pub fn beatty_value(r: u64, a: u64) -> u64 {
    let sq = r as u128 * a as u128 * a as u128;
    sq.isqrt() as u64
}

/// Beatty set `{ floor(a sqrt(r)) : a >= 1 }`.
pub fn gen_beatty(r: u64, x: u64) -> Result<IntegerSet> {
    if r < 2 {
        return invalid(format!("Beatty parameter r must be >= 2, got {r}"));
    }
    if r.isqrt() * r.isqrt() == r {
        return invalid(format!("r = {r} is a perfect square"));
    }
    let mut s = IntegerSet::empty(x)?;
    for a in 1.. {
        let v = beatty_value(r, a);
        if v > x {
            break;
        }
        s.set(v);
    }
    s.recount();
    Ok(s)
}

/// `{ n : n mod q ∈ residues }`.
pub fn gen_periodic(q: u64, residues: &[u64], x: u64) -> Result<IntegerSet> {
    if q == 0 {
        return invalid("modulus must be positive");
    }
    if let Some(r) = residues.iter().find(|&&r| r >= q) {
        return invalid(format!("residue {r} is not reduced mod {q}"));
    }
    let mut table = vec![false; q as usize];
    for &r in residues {
        table[r as usize] = true;
    }
    IntegerSet::from_predicate(x, |n| table[(n % q) as usize])
}

pub fn gen_multiplicative(spec: &MultiplicativeSpec, x: u64) -> Result<IntegerSet> {
    let spf = num::smallest_prime_factors(x as usize);
    let mut s = IntegerSet::empty(x)?;
    for p in (2..=x).filter(|&n| spf[n as usize] as u64 == n) {
        if !spec.value(p, 0) {
            return invalid(format!(
                "rule {} is not 1 at p^0 for p = {p}",
                spec.label()
            ));
        }
    }
    s.set(1);
    for n in 2..=x {
        let mut m = n as usize;
        let mut member = true;
        while m > 1 {
            let p = spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if !spec.value(p as u64, e) {
                member = false;
                break;
            }
        }
        if member {
            s.set(n);
        }
    }
    s.recount();
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Intersect,
    Union,
    Complement,
}

pub fn combine(op: SetOp, a: &IntegerSet, b: Option<&IntegerSet>) -> Result<IntegerSet> {
    let mut out = a.clone();
    match (op, b) {
        (SetOp::Complement, None) => {
            out.words.iter_mut().for_each(|w| *w = !*w);
            out.clear_tail();
        }
        (SetOp::Complement, Some(_)) => return invalid("complement takes a single set"),
        (_, None) => return invalid("binary set operation needs two sets"),
        (op, Some(b)) => {
            if a.limit != b.limit {
                return Err(Error::LimitMismatch(a.limit, b.limit));
            }
            for (w, &v) in out.words.iter_mut().zip(&b.words) {
                *w = if op == SetOp::Intersect { *w & v } else { *w | v };
            }
        }
    }
    out.recount();
    Ok(out)
}

pub fn density(a: &IntegerSet) -> f64 {
    a.density()
}

/// A named, serializable description of a generated set family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SetFamily {
    Kfree { k: u32 },
    Beatty { r: u64 },
    Periodic { q: u64, residues: Vec<u64> },
    /// 0/1 multiplicative set vanishing on every prime up to `bound`.
    Sifted { bound: u64 },
    Full,
}

impl SetFamily {
    pub fn generate(&self, x: u64) -> Result<IntegerSet> {
        match self {
            SetFamily::Kfree { k } => gen_kfree(*k, x),
            SetFamily::Beatty { r } => gen_beatty(*r, x),
            SetFamily::Periodic { q, residues } => gen_periodic(*q, residues, x),
            SetFamily::Sifted { bound } => {
                gen_multiplicative(&MultiplicativeSpec::excluding_primes_up_to(*bound), x)
            }
            SetFamily::Full => IntegerSet::full(x),
        }
    }

    /// Short identifier used in report rows.
    pub fn id(&self) -> String {
        match self {
            SetFamily::Kfree { k } => format!("kfree{k}"),
            SetFamily::Beatty { r } => format!("beatty{r}"),
            SetFamily::Periodic { q, residues } => format!(
                "periodic{q}[{}]",
                residues
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            SetFamily::Sifted { bound } => format!("sifted{bound}"),
            SetFamily::Full => "full".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_kfree(k: u32, n: u64) -> bool {
        (2..=n).all(|d| d.checked_pow(k).is_none_or(|dk| n % dk != 0))
    }

    #[test]
    fn kfree_examples() {
        assert_eq!(gen_kfree(2, 3).unwrap().to_vec(), vec![1, 2, 3]);
        let sf = gen_kfree(2, 30).unwrap();
        assert_eq!(sf.count(), 19);
        let excluded: Vec<u64> = (1..=30).filter(|&n| !sf.contains(n)).collect();
        assert_eq!(excluded, vec![4, 8, 9, 12, 16, 18, 20, 24, 25, 27, 28]);
        assert_eq!(gen_kfree(3, 8).unwrap().to_vec(), vec![1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn kfree_matches_trial_division() {
        for k in [2, 3, 4] {
            let s = gen_kfree(k, 10_000).unwrap();
            for n in 1..=10_000 {
                assert_eq!(s.contains(n), trial_division_kfree(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn kfree_rejects_bad_args() {
        assert!(gen_kfree(1, 10).is_err());
        assert!(gen_kfree(2, 0).is_err());
    }

    #[test]
    fn beatty_examples() {
        assert_eq!(gen_beatty(2, 10).unwrap().to_vec(), vec![1, 2, 4, 5, 7, 8, 9]);
        assert_eq!(gen_beatty(3, 10).unwrap().to_vec(), vec![1, 3, 5, 6, 8, 10]);
        assert_eq!(gen_beatty(2, 1).unwrap().to_vec(), vec![1]);
        assert!(gen_beatty(4, 10).is_err());
        assert!(gen_beatty(1, 10).is_err());
    }

    #[test]
    fn beatty_gaps() {
        for r in [2u64, 3] {
            let s = gen_beatty(r, 100_000).unwrap().to_vec();
            let g = r.isqrt();
            assert!(s.windows(2).all(|w| w[1] - w[0] == g || w[1] - w[0] == g + 1));
        }
    }

    #[test]
    fn beatty_value_exact_near_overflow() {
        let a = 3_000_000_000u64;
        let v = beatty_value(2, a);
        let sq = 2u128 * a as u128 * a as u128;
        assert!((v as u128) * (v as u128) <= sq && (v as u128 + 1).pow(2) > sq);
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(gen_periodic(1, &[0], 5).unwrap().to_vec(), vec![1, 2, 3, 4, 5]);
        assert_eq!(gen_periodic(2, &[1], 6).unwrap().to_vec(), vec![1, 3, 5]);
        assert_eq!(
            gen_periodic(3, &[1, 2], 9).unwrap().to_vec(),
            vec![1, 2, 4, 5, 7, 8]
        );
        let empty = gen_periodic(4, &[], 10).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.density(), 0.0);
        assert!(gen_periodic(3, &[3], 9).is_err());
    }

    #[test]
    fn multiplicative_examples() {
        let sf = gen_multiplicative(&MultiplicativeSpec::kfree(2), 30).unwrap();
        assert_eq!(sf, gen_kfree(2, 30).unwrap());
        let all = gen_multiplicative(&MultiplicativeSpec::all(), 10).unwrap();
        assert_eq!(all.to_vec(), (1..=10).collect::<Vec<_>>());
        let odd = gen_multiplicative(&MultiplicativeSpec::excluding_primes(vec![2]), 10).unwrap();
        assert_eq!(odd.to_vec(), vec![1, 3, 5, 7, 9]);
    }

    #[test]
    fn multiplicative_rejects_rule_without_unit() {
        let bad = MultiplicativeSpec::new("bad", |p, _| p != 3);
        assert!(gen_multiplicative(&bad, 10).is_err());
    }

    #[test]
    fn multiplicative_squarefree_bit_for_bit() {
        let x = 200_000;
        assert_eq!(
            gen_multiplicative(&MultiplicativeSpec::kfree(2), x).unwrap(),
            gen_kfree(2, x).unwrap()
        );
    }

    #[test]
    fn combine_examples() {
        let sf = gen_kfree(2, 30).unwrap();
        let cop3 = gen_periodic(3, &[1, 2], 30).unwrap();
        let both = combine(SetOp::Intersect, &sf, Some(&cop3)).unwrap();
        assert_eq!(
            both.to_vec(),
            vec![1, 2, 5, 7, 10, 11, 13, 14, 17, 19, 22, 23, 26, 29]
        );
        let oracle: Vec<u64> = (1..=30)
            .filter(|&n| n % 3 != 0 && (2..=5u64).all(|d| n % (d * d) != 0))
            .collect();
        assert_eq!(both.to_vec(), oracle);
        assert_eq!(combine(SetOp::Intersect, &sf, Some(&sf)).unwrap(), sf);
        let odds = gen_periodic(2, &[1], 6).unwrap();
        assert_eq!(
            combine(SetOp::Complement, &odds, None).unwrap().to_vec(),
            vec![2, 4, 6]
        );
        let other = gen_kfree(2, 31).unwrap();
        assert_eq!(
            combine(SetOp::Union, &sf, Some(&other)),
            Err(Error::LimitMismatch(30, 31))
        );
    }

    #[test]
    fn densities() {
        assert_eq!(gen_periodic(2, &[1], 1_000_000).unwrap().density(), 0.5);
        let sf = gen_kfree(2, 1_000_000).unwrap().density();
        assert!((sf - 6.0 / std::f64::consts::PI.powi(2)).abs() < 2e-3);
        let b = gen_beatty(2, 1_000_000).unwrap().density();
        assert!((b - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-5);
    }

    #[test]
    fn binary_and_text_formats() {
        let s = gen_beatty(3, 1000).unwrap();
        let bytes = s.to_bytes();
        assert_eq!(&bytes[..4], b"APST");
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 1000);
        assert_eq!(IntegerSet::from_bytes(&bytes).unwrap(), s);
        assert_eq!(IntegerSet::from_text(&s.to_text()).unwrap(), s);

        let mut corrupt = bytes.clone();
        *corrupt.last_mut().unwrap() = 0xff;
        assert!(IntegerSet::from_bytes(&corrupt).is_err());
        assert!(IntegerSet::from_bytes(&bytes[..20]).is_err());
        assert!(IntegerSet::from_bytes(b"NOPE0000000000000000").is_err());
    }

    #[test]
    fn family_roundtrip() {
        let fam = SetFamily::Periodic {
            q: 3,
            residues: vec![1, 2],
        };
        assert_eq!(fam.generate(9).unwrap().count(), 6);
        assert_eq!(fam.id(), "periodic3[1,2]");
    }
}
