//! Binary necklaces with `n` black and `k` white beads, stored as the
//! lexicographically least rotation of their gap code.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, divisors, euler_phi, gcd};
use crate::code::{enumerate_codes, Code};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace {
    canonical: Code,
}

impl Necklace {
    pub fn canonical(&self) -> &Code {
        &self.canonical
    }

    pub fn n(&self) -> usize {
        self.canonical.n()
    }

    pub fn k(&self) -> u64 {
        self.canonical.k()
    }

    pub fn period(&self) -> usize {
        self.canonical.period()
    }

    pub fn word(&self) -> BeadWord {
        code_to_word(&self.canonical)
    }

    pub fn contains(&self, f: &Code) -> bool {
        canonicalize(f) == *self
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.canonical)
    }
}

#[derive(Serialize)]
struct NecklaceJson<'a> {
    canonical: &'a [u32],
    word: String,
}

/// JSON form: `{"canonical": [...], "word": "B..W.."}`.
impl Serialize for Necklace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        NecklaceJson { canonical: self.canonical.entries(), word: self.word().0 }.serialize(serializer)
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan, O(n)).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (&s[(i + k) % n], &s[(j + k) % n]);
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// True when no rotation of `s` is lexicographically smaller than `s`.
pub fn is_least_rotation<T: Ord>(s: &[T]) -> bool {
    let r = least_rotation(s);
    r == 0 || s[r..].iter().chain(&s[..r]).eq(s.iter())
}

pub fn canonicalize(f: &Code) -> Necklace {
    let start = least_rotation(f.entries());
    Necklace { canonical: f.rotate(start as i64) }
}

/// A cyclic bead string over `{B, W}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BeadWord(String);

impl BeadWord {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn black(&self) -> usize {
        self.0.bytes().filter(|&b| b == b'B').count()
    }

    pub fn white(&self) -> usize {
        self.0.len() - self.black()
    }
}

impl fmt::Display for BeadWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for BeadWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains('B') || s.chars().any(|c| c != 'B' && c != 'W') {
            return Err(Error::ParseWord(s.to_string()));
        }
        Ok(BeadWord(s.to_string()))
    }
}

/// Each entry `f[j]` becomes a black bead followed by `f[j]` white beads.
pub fn code_to_word(f: &Code) -> BeadWord {
    let mut word = String::with_capacity(f.n() + f.k() as usize);
    for &e in f.entries() {
        word.push('B');
        word.extend(std::iter::repeat_n('W', e as usize));
    }
    BeadWord(word)
}

/// Gap counts after each black bead, reading from the first `B`; white beads
/// before it wrap around onto the last gap.
pub fn word_to_code(w: &BeadWord) -> Result<Code> {
    let bytes = w.0.as_bytes();
    let first = bytes.iter().position(|&b| b == b'B').ok_or_else(|| Error::ParseWord(w.0.clone()))?;
    let len = bytes.len();
    let mut gaps = Vec::new();
    for step in 0..len {
        match bytes[(first + step) % len] {
            b'B' => gaps.push(0u32),
            _ => *gaps.last_mut().expect("starts on a black bead") += 1,
        }
    }
    Code::new(gaps)
}

/// Necklaces of `N_{n,k}` (or only those of period `n`), sorted by canonical code.
pub fn enumerate_necklaces(n: usize, k: u64, full_period_only: bool) -> impl Iterator<Item = Necklace> {
    enumerate_codes(n, k, None, full_period_only)
        .filter(|f| is_least_rotation(f.entries()))
        .map(|canonical| Necklace { canonical })
}

/// `|N_{n,k}| = 1/(n+k) Σ_{m | gcd(n,k)} φ(m) C((n+k)/m, n/m)`.
pub fn count_necklaces(n: usize, k: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("count_necklaces needs n >= 1".into()));
    }
    let n = n as u64;
    let total = divisors(gcd(n, k))
        .into_iter()
        .map(|m| Ok(BigUint::from(euler_phi(m)?) * binomial((n + k) / m, n / m)?))
        .sum::<Result<BigUint>>()?;
    let size = BigUint::from(n + k);
    debug_assert_eq!(&total % &size, BigUint::from(0u32));
    Ok(total / size)
}
