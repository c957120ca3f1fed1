//! Base-3 digit stream of the constant `c`, its truncations and shifts.
//!
//! The constant starts `0.11` and continues with every finite tuple over
//! `{0, 2}`. In [`EnumerationMode::Canonical`] the tuples are concatenated
//! in length-lexicographic order (`0 < 2`), so the stream begins
//! `11 0 2 00 02 20 22 000 002 ...`. Digits are indexed from 1.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::interval::RationalInterval;
use crate::rational::{pow3, Rational};

/// How the tail of the digit stream is produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumerationMode {
    /// `11` followed by all `{0,2}`-tuples in length-lexicographic order.
    Canonical,
    /// Digits supplied externally (see [`parse_digit_file`]).
    ExplicitFile(Arc<[u8]>),
}

/// All `{0,2}`-tuples of length `1..=max_len` in length-lexicographic order.
pub fn enumerate_tuples(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for rank in 0..(1u64 << len) {
            out.push(tuple_from_rank(rank, len));
        }
    }
    out
}

/// The `rank`-th tuple of length `len` in lexicographic order.
fn tuple_from_rank(rank: u64, len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| {
            if (rank >> (len - 1 - i)) & 1 == 1 {
                2
            } else {
                0
            }
        })
        .collect()
}

/// Number of digits preceding the block of length-`len` tuples in the
/// Canonical stream (the leading `11` included).
pub fn block_offset(len: usize) -> u64 {
    2 + (1..len).map(|l| (l as u64) << l).sum::<u64>()
}

/// Closed-form shift `k` at which `tuple` appears as its own entry of the
/// Canonical enumeration. [`find_shift`] never returns more than this.
pub fn canonical_occurrence(tuple: &[u8]) -> u64 {
    let len = tuple.len();
    let rank = tuple
        .iter()
        .fold(0u64, |acc, &d| (acc << 1) | u64::from(d == 2));
    block_offset(len) + rank * len as u64
}

fn canonical_prefix(n: usize) -> Vec<u8> {
    let mut digits = Vec::with_capacity(n + 64);
    digits.extend_from_slice(&[1, 1]);
    let mut len = 1;
    while digits.len() < n {
        for rank in 0..(1u64 << len) {
            digits.extend(tuple_from_rank(rank, len));
            if digits.len() >= n {
                break;
            }
        }
        len += 1;
    }
    digits.truncate(n);
    digits
}

/// Parses the external digit format: optional `0.` prefix, base-3 digits,
/// whitespace ignored. The stream must start `11` and use only `0`/`2`
/// after position 2.
pub fn parse_digit_file(text: &str) -> Result<Vec<u8>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let body = compact.strip_prefix("0.").unwrap_or(&compact);
    let mut digits = Vec::with_capacity(body.len());
    for (i, ch) in body.chars().enumerate() {
        let d = match ch {
            '0' => 0,
            '1' => 1,
            '2' => 2,
            other => {
                return Err(Error::InvalidDigitFile(format!(
                    "character {other:?} at position {} is not a base-3 digit",
                    i + 1
                )))
            }
        };
        if i >= 2 && d == 1 {
            return Err(Error::InvalidDigitFile(format!(
                "digit 1 at position {} (only 0 and 2 allowed after the leading 11)",
                i + 1
            )));
        }
        digits.push(d);
    }
    if digits.len() < 2 || digits[0] != 1 || digits[1] != 1 {
        return Err(Error::InvalidDigitFile("stream must begin with 11".into()));
    }
    Ok(digits)
}

/// The base-3 digits of `c`, generated on demand and cached.
///
/// Cached prefixes are immutable snapshots and may be shared freely
/// between threads.
#[derive(Debug)]
pub struct DigitStream {
    mode: EnumerationMode,
    cache: RwLock<Arc<[u8]>>,
}

impl DigitStream {
    pub fn canonical() -> Self {
        DigitStream {
            mode: EnumerationMode::Canonical,
            cache: RwLock::new(Arc::from(canonical_prefix(256))),
        }
    }

    pub fn from_mode(mode: EnumerationMode) -> Self {
        match mode {
            EnumerationMode::Canonical => Self::canonical(),
            EnumerationMode::ExplicitFile(digits) => DigitStream {
                cache: RwLock::new(digits.clone()),
                mode: EnumerationMode::ExplicitFile(digits),
            },
        }
    }

    pub fn from_digits(text: &str) -> Result<Self> {
        let digits: Arc<[u8]> = Arc::from(parse_digit_file(text)?);
        Ok(DigitStream {
            mode: EnumerationMode::ExplicitFile(digits.clone()),
            cache: RwLock::new(digits),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidDigitFile(format!("cannot read {}: {e}", path.display())))?;
        Self::from_digits(&text)
    }

    pub fn mode(&self) -> &EnumerationMode {
        &self.mode
    }

    /// Snapshot holding at least `n` digits.
    pub fn prefix(&self, n: usize) -> Result<Arc<[u8]>> {
        {
            let cached = self.cache.read().unwrap();
            if cached.len() >= n {
                return Ok(cached.clone());
            }
        }
        match &self.mode {
            EnumerationMode::ExplicitFile(digits) => Err(Error::DigitsExhausted {
                requested: n,
                available: digits.len(),
            }),
            EnumerationMode::Canonical => {
                let mut cached = self.cache.write().unwrap();
                if cached.len() < n {
                    let target = n.max(cached.len() * 2);
                    *cached = Arc::from(canonical_prefix(target));
                }
                Ok(cached.clone())
            }
        }
    }

    /// `d_1 … d_n`.
    pub fn c_digits(&self, n: usize) -> Result<Vec<u8>> {
        Ok(self.prefix(n)?[..n].to_vec())
    }

    /// `d_{k+1} … d_{k+n}`, the first `n` digits of `σ^k(c)`.
    pub fn shift_digits(&self, k: usize, n: usize) -> Result<Vec<u8>> {
        Ok(self.prefix(k + n)?[k..k + n].to_vec())
    }

    /// `[T_p, T_p + 3^(-p)]` where `T_p` is the `p`-digit truncation of `c`.
    pub fn c_interval(&self, p: usize) -> Result<RationalInterval> {
        Ok(truncation_interval(&self.prefix(p)?[..p]))
    }

    /// Enclosure of `σ^k(c)` from `n` digits after the shift.
    pub fn shift_interval(&self, k: usize, n: usize) -> Result<RationalInterval> {
        Ok(truncation_interval(&self.prefix(k + n)?[k..k + n]))
    }

    /// Smallest `k >= 2` with `d_{k+i} = y_i` for `i = 1..n`, scanning the
    /// first `max_search` digits.
    pub fn find_shift(&self, target: &CantorPoint, max_search: usize) -> Result<usize> {
        let n = target.len();
        let not_found = || Error::NotFoundWithinBound {
            target: target.to_string(),
            bound: max_search,
        };
        if n == 0 || max_search < n + 2 {
            return Err(not_found());
        }
        let available = match &self.mode {
            EnumerationMode::Canonical => max_search,
            EnumerationMode::ExplicitFile(d) => max_search.min(d.len()),
        };
        let digits = self.prefix(available)?;
        digits[..available]
            .windows(n)
            .enumerate()
            .skip(2)
            .find(|(_, w)| *w == target.digits())
            .map(|(k, _)| k)
            .ok_or_else(not_found)
    }
}

impl Clone for DigitStream {
    fn clone(&self) -> Self {
        DigitStream {
            mode: self.mode.clone(),
            cache: RwLock::new(self.cache.read().unwrap().clone()),
        }
    }
}

impl Default for DigitStream {
    fn default() -> Self {
        Self::canonical()
    }
}

/// Integer `Σ d_i 3^(n-i)`, i.e. the truncation scaled by `3^n`.
pub fn truncation_numerator(digits: &[u8]) -> BigInt {
    digits
        .iter()
        .fold(BigInt::zero(), |acc, &d| acc * 3u32 + BigInt::from(d))
}

/// Exact value `Σ d_i 3^(-i)`.
pub fn truncation_value(digits: &[u8]) -> Rational {
    Rational::new(truncation_numerator(digits), pow3(digits.len()))
}

fn truncation_interval(digits: &[u8]) -> RationalInterval {
    let num = truncation_numerator(digits);
    let den = pow3(digits.len());
    RationalInterval::new(
        Rational::new(num.clone(), den.clone()),
        Rational::new(num + 1, den),
    )
}

/// A point of the middle-third Cantor set given by finitely many `{0,2}` digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CantorPoint(Vec<u8>);

impl CantorPoint {
    pub fn new(digits: Vec<u8>) -> Result<Self> {
        if digits.iter().any(|&d| d != 0 && d != 2) {
            return Err(Error::InvalidArgument(
                "Cantor digits must be 0 or 2".into(),
            ));
        }
        Ok(CantorPoint(digits))
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn value(&self) -> Rational {
        truncation_value(&self.0)
    }
}

impl FromStr for CantorPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '2' => Ok(2),
                _ => Err(Error::InvalidArgument(format!("bad Cantor digit {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        CantorPoint::new(digits)
    }
}

impl fmt::Display for CantorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        digits_to_string(&self.0).fmt(f)
    }
}

pub fn digits_to_string(digits: &[u8]) -> String {
    digits.iter().map(|d| char::from(b'0' + d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn s(d: &[u8]) -> String {
        digits_to_string(d)
    }

    #[test]
    fn tuple_enumeration_order() {
        let t1: Vec<String> = enumerate_tuples(1).iter().map(|t| s(t)).collect();
        assert_eq!(t1, ["0", "2"]);
        let t2: Vec<String> = enumerate_tuples(2).iter().map(|t| s(t)).collect();
        assert_eq!(t2, ["0", "2", "00", "02", "20", "22"]);
        let t3 = enumerate_tuples(3);
        assert_eq!(t3.len(), 14);
        assert_eq!(s(t3.last().unwrap()), "222");
    }

    #[test]
    fn canonical_prefixes() {
        let c = DigitStream::canonical();
        assert_eq!(s(&c.c_digits(2).unwrap()), "11");
        assert_eq!(s(&c.c_digits(6).unwrap()), "110200");
        assert_eq!(s(&c.c_digits(12).unwrap()), "110200022022");
    }

    #[test]
    fn c_interval_examples() {
        let c = DigitStream::canonical();
        let i2 = c.c_interval(2).unwrap();
        assert_eq!((i2.lo(), i2.hi()), (&frac(4, 9), &frac(5, 9)));
        let i6 = c.c_interval(6).unwrap();
        assert_eq!((i6.lo(), i6.hi()), (&frac(342, 729), &frac(343, 729)));
        let i4 = c.c_interval(4).unwrap();
        assert_eq!((i4.lo(), i4.hi()), (&frac(38, 81), &frac(39, 81)));
    }

    #[test]
    fn shift_examples() {
        let c = DigitStream::canonical();
        assert_eq!(s(&c.shift_digits(0, 2).unwrap()), "11");
        assert_eq!(s(&c.shift_digits(2, 4).unwrap()), "0200");
        assert_eq!(s(&c.shift_digits(3, 1).unwrap()), "2");
    }

    #[test]
    fn find_shift_examples() {
        let c = DigitStream::canonical();
        let find = |t: &str, m| c.find_shift(&t.parse().unwrap(), m).unwrap();
        assert_eq!(find("0", 10), 2);
        assert_eq!(find("2", 10), 3);
        // digits 8-9 of 110200022022 are "22"
        assert_eq!(find("22", 20), 7);
    }

    #[test]
    fn find_shift_reports_bound() {
        let c = DigitStream::from_digits("0.1102").unwrap();
        let err = c.find_shift(&"00".parse().unwrap(), 4).unwrap_err();
        assert!(matches!(err, Error::NotFoundWithinBound { bound: 4, .. }));
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation_value(&[1]), frac(1, 3));
        assert_eq!(truncation_value(&[1, 1]), frac(4, 9));
        assert_eq!(truncation_value(&[0, 0, 0, 1, 1, 2, 1]), frac(43, 2187));
    }

    #[test]
    fn digit_file_parsing() {
        let d = parse_digit_file("0.1102 0022\n0020222").unwrap();
        assert_eq!(s(&d), "110200220020222");
        assert!(parse_digit_file("0.12").is_err());
        assert!(parse_digit_file("1121").is_err());
        assert!(parse_digit_file("113").is_err());
        assert!(parse_digit_file("11x").is_err());
    }

    #[test]
    fn explicit_file_exhaustion() {
        let c = DigitStream::from_digits("0.110200220020222").unwrap();
        assert_eq!(s(&c.c_digits(15).unwrap()), "110200220020222");
        assert_eq!(
            c.c_digits(16).unwrap_err(),
            Error::DigitsExhausted {
                requested: 16,
                available: 15
            }
        );
    }

    #[test]
    fn stream_invariants_hold_on_long_prefix() {
        let c = DigitStream::canonical();
        let d = c.c_digits(5000).unwrap();
        assert_eq!(&d[..2], &[1, 1]);
        assert!(d[2..].iter().all(|&x| x == 0 || x == 2));
        assert_eq!(c.c_digits(300).unwrap(), d[..300].to_vec());
    }

    #[test]
    fn every_short_tuple_occurs_by_closed_form() {
        let c = DigitStream::canonical();
        let digits = c.c_digits(10_000).unwrap();
        for t in enumerate_tuples(8) {
            let k = canonical_occurrence(&t) as usize;
            assert_eq!(&digits[k..k + t.len()], &t[..]);
            let found = c
                .find_shift(&CantorPoint::new(t.clone()).unwrap(), 10_000)
                .unwrap();
            assert!(found <= k);
        }
    }

    proptest! {
        #[test]
        fn intervals_nest_and_shrink(p in 1usize..200) {
            let c = DigitStream::canonical();
            let a = c.c_interval(p).unwrap();
            let b = c.c_interval(p + 1).unwrap();
            prop_assert!(b.is_subset_of(&a));
            prop_assert_eq!(a.width(), b.width() * frac(3, 1));
            prop_assert_eq!(truncation_value(&c.c_digits(p).unwrap()), a.lo().clone());
        }

        #[test]
        fn shift_matches_prefix_substring(k in 0usize..300, n in 1usize..50) {
            let c = DigitStream::canonical();
            let whole = c.c_digits(k + n).unwrap();
            prop_assert_eq!(c.shift_digits(k, n).unwrap(), whole[k..].to_vec());
        }

        #[test]
        fn located_shift_is_within_cantor_bound(rank in 0u64..64, len in 1usize..=6) {
            let rank = rank % (1 << len);
            let t = CantorPoint::new(tuple_from_rank(rank, len)).unwrap();
            let c = DigitStream::canonical();
            let k = c.find_shift(&t, 10_000).unwrap();
            // |σ^k(c) − 0.t| < 3^(−len), certified on a 40-digit enclosure
            let enc = c.shift_interval(k, len + 40).unwrap();
            let bound = crate::rational::inv_pow3(len);
            let y = t.value();
            prop_assert!(enc.lo() >= &y);
            prop_assert!(enc.hi() - &y < bound);
        }
    }
}
