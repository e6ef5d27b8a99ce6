//! Cyclic integer codes: a length-`n` array of nonnegative entries summing to `k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cyclic sequence of `n >= 1` nonnegative integers. Position `j` holds the
/// count at cyclic position `j`; all index arithmetic is modulo `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    entries: Vec<u32>,
    k: u64,
}

impl Code {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyCode);
        }
        let k = entries.iter().map(|&e| u64::from(e)).sum();
        Ok(Code { entries, k })
    }

    /// Builds a code from signed input, rejecting negative entries.
    pub fn from_signed(entries: &[i64]) -> Result<Self> {
        let entries = entries
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                u32::try_from(value).map_err(|_| {
                    if value < 0 {
                        Error::NegativeEntry { index, value }
                    } else {
                        Error::ParseCode {
                            literal: value.to_string(),
                            reason: "entry does not fit in 32 bits".into(),
                        }
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Code::new(entries)
    }

    /// The constant code `[k/n; n]`, if `n` divides `k`.
    pub fn constant(n: usize, k: u64) -> Option<Self> {
        if n == 0 || !k.is_multiple_of(n as u64) {
            return None;
        }
        Code::new(vec![(k / n as u64) as u32; n]).ok()
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    /// Entry at cyclic position `j`.
    pub fn at(&self, j: usize) -> u32 {
        self.entries[j % self.n()]
    }

    /// Shifts entries left by `steps` (mod n): `rotate(f, 1)` sends
    /// `(f0, ..., f(n-1))` to `(f1, ..., f(n-1), f0)`. Negative steps undo it.
    pub fn rotate(&self, steps: i64) -> Code {
        let n = self.n();
        let s = steps.rem_euclid(n as i64) as usize;
        let mut entries = Vec::with_capacity(n);
        entries.extend_from_slice(&self.entries[s..]);
        entries.extend_from_slice(&self.entries[..s]);
        Code { entries, k: self.k }
    }

    /// `Σ j·f[j] mod n`, with weight `j` at index `j`.
    pub fn weighted_sum(&self) -> usize {
        let n = self.n() as u64;
        let total = self
            .entries
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &e)| (acc + (j as u64 * u64::from(e)) % n) % n);
        total as usize
    }

    /// Smallest divisor `d` of `n` with `f[j] = f[j + d]` for all `j`.
    pub fn period(&self) -> usize {
        let n = self.n();
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (0..n - d).all(|j| self.entries[j] == self.entries[j + d]))
            .unwrap_or(n)
    }

    pub fn is_full_period(&self) -> bool {
        self.period() == self.n()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|&e| e == self.entries[0])
    }

    pub(crate) fn from_parts(entries: Vec<u32>, k: u64) -> Code {
        debug_assert_eq!(entries.iter().map(|&e| u64::from(e)).sum::<u64>(), k);
        Code { entries, k }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Parses comma-separated decimal entries such as `"3,0,0"`. Whitespace is ignored.
impl FromStr for Code {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: String| Error::ParseCode { literal: s.to_string(), reason };
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::EmptyCode);
        }
        let values = cleaned
            .split(',')
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|e| parse_err(format!("bad entry {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Code::from_signed(&values)
    }
}

#[derive(Serialize, Deserialize)]
struct CodeJson {
    entries: Vec<u32>,
    n: usize,
    k: u64,
}

/// JSON form: `{"entries": [...], "n": .., "k": ..}`.
impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CodeJson { entries: self.entries.clone(), n: self.n(), k: self.k }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = CodeJson::deserialize(deserializer)?;
        let code = Code::new(raw.entries).map_err(serde::de::Error::custom)?;
        if code.n() != raw.n || code.k != raw.k {
            return Err(serde::de::Error::custom("n/k fields disagree with entries"));
        }
        Ok(code)
    }
}

/// Lexicographic stream of all compositions of `k` into `n` nonnegative parts.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
    k: u64,
    fixed: usize,
}

impl Compositions {
    pub fn new(n: usize, k: u64) -> Self {
        let current = (n > 0).then(|| {
            let mut first = vec![0; n];
            first[n - 1] = k as u32;
            first
        });
        Compositions { current, k, fixed: 0 }
    }

    /// Starts at the lexicographically first composition with the given prefix
    /// and stops once the prefix changes. Streams for all prefixes of a given
    /// length partition the full stream in order.
    pub fn with_prefix(n: usize, k: u64, prefix: &[u32]) -> Self {
        let used: u64 = prefix.iter().map(|&e| u64::from(e)).sum();
        if prefix.len() > n || used > k || (prefix.len() == n && used != k) {
            return Compositions { current: None, k, fixed: 0 };
        }
        let mut first = prefix.to_vec();
        first.resize(n, 0);
        if prefix.len() < n {
            first[n - 1] = (k - used) as u32;
        }
        Compositions { current: Some(first), k, fixed: prefix.len() }
    }
}

impl Iterator for Compositions {
    type Item = Code;

    fn next(&mut self) -> Option<Code> {
        let cur = self.current.take()?;
        let n = cur.len();
        let out = Code::from_parts(cur.clone(), self.k);
        // successor: bump the rightmost position (before the last) whose suffix
        // is nonempty, then dump the remaining mass into the last slot
        let mut next = cur;
        let mut suffix = u64::from(next[n - 1]);
        let mut i = n.saturating_sub(1);
        while i > self.fixed {
            i -= 1;
            if suffix > 0 {
                next[i] += 1;
                for e in &mut next[i + 1..] {
                    *e = 0;
                }
                next[n - 1] = (suffix - 1) as u32;
                self.current = Some(next);
                break;
            }
            suffix += u64::from(next[i]);
        }
        Some(out)
    }
}

/// Codes of `F_{n,k}` in lexicographic order, optionally restricted to one
/// weighted-sum residue `t` and/or to codes of full period `n`.
pub fn enumerate_codes(
    n: usize,
    k: u64,
    t: Option<usize>,
    full_period_only: bool,
) -> impl Iterator<Item = Code> {
    Compositions::new(n, k).filter(move |f| {
        t.is_none_or(|t| f.weighted_sum() == t) && (!full_period_only || f.is_full_period())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> Code {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        let f = Code::new(vec![3, 0, 0]).unwrap();
        assert_eq!((f.n(), f.k()), (3, 3));
        let f = code("4,2,1");
        assert_eq!((f.n(), f.k()), (3, 7));
        assert_eq!(Code::new(vec![]), Err(Error::EmptyCode));
        assert_eq!(Code::from_signed(&[]), Err(Error::EmptyCode));
        assert_eq!(
            Code::from_signed(&[1, -2]),
            Err(Error::NegativeEntry { index: 1, value: -2 })
        );
        assert!(matches!("1,x".parse::<Code>(), Err(Error::ParseCode { .. })));
        assert_eq!(code(" 1, 2 ,3 "), code("1,2,3"));
        assert_eq!(code("3,0,0").to_string(), "3,0,0");
    }

    #[test]
    fn json_shape() {
        let f = code("3,0,0");
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(v, serde_json::json!({"entries": [3, 0, 0], "n": 3, "k": 3}));
        assert_eq!(serde_json::from_value::<Code>(v).unwrap(), f);
        let bad = serde_json::json!({"entries": [3, 0, 0], "n": 3, "k": 4});
        assert!(serde_json::from_value::<Code>(bad).is_err());
    }

    #[test]
    fn rotation() {
        let f = code("4,2,1");
        assert_eq!(f.rotate(1), code("2,1,4"));
        assert_eq!(f.rotate(0), f);
        assert_eq!(f.rotate(-1), code("1,4,2"));
        for s in 0..3 {
            assert_eq!(f.rotate(s).rotate(3 - s), f);
        }
    }

    #[test]
    fn weighted_sums() {
        assert_eq!(code("4,2,1").weighted_sum(), 1);
        assert_eq!(code("1,4,2").weighted_sum(), 2);
        assert_eq!(code("2,1,4").weighted_sum(), 0);
        assert_eq!(code("1,1,1").weighted_sum(), 0);
        assert_eq!(code("7").weighted_sum(), 0);
    }

    #[test]
    fn periods() {
        assert_eq!(code("3,0,0").period(), 3);
        assert_eq!(code("1,1,1").period(), 1);
        assert_eq!(code("2,0,2,0").period(), 2);
        assert_eq!(code("1,2,1,2,1,2").period(), 2);
        assert_eq!(code("1,1,2,1,1,2").period(), 3);
        assert_eq!(code("5").period(), 1);
    }

    #[test]
    fn composition_counts() {
        assert_eq!(enumerate_codes(3, 7, None, false).count(), 36);
        assert_eq!(enumerate_codes(1, 4, None, false).collect::<Vec<_>>(), vec![code("4")]);
        assert_eq!(enumerate_codes(4, 0, None, false).count(), 1);
    }

    #[test]
    fn residue_filters() {
        let got: Vec<_> = enumerate_codes(3, 3, Some(0), false).collect();
        assert_eq!(got, vec![code("0,0,3"), code("0,3,0"), code("1,1,1"), code("3,0,0")]);
        let got: Vec<_> = enumerate_codes(2, 4, Some(0), false).collect();
        assert_eq!(got, vec![code("0,4"), code("2,2"), code("4,0")]);
        let got: Vec<_> = enumerate_codes(3, 3, Some(0), true).collect();
        assert_eq!(got, vec![code("0,0,3"), code("0,3,0"), code("3,0,0")]);
    }

    #[test]
    fn prefix_streams_partition_the_full_stream() {
        for n in 1..6 {
            for k in 0..6u64 {
                let all: Vec<_> = Compositions::new(n, k).collect();
                let mut joined = Vec::new();
                for first in 0..=k as u32 {
                    joined.extend(Compositions::with_prefix(n, k, &[first]));
                }
                assert_eq!(joined, all, "n={n} k={k}");
            }
        }
    }
}
