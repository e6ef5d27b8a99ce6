//! Slime decomposition and slime migration.
//!
//! For a code `f` let `m` be the largest sum of two cyclically adjacent entries.
//! A *slime* is a maximal cyclic interval (of size at least 2) on which every
//! adjacent pair sums to `m`; its entries alternate `a, b, a, b, ...` with
//! `a + b = m`. A code is *invalid* when every adjacent pair sums to `m`, i.e.
//! the whole circle is one slime with no cutoff.
//!
//! A forward move on an even slime `a, b, ..., a, b` gives
//! `a-1, b+1, ..., a-1, b+1`; on an odd slime `a, b, ..., b, a` it gives
//! `a, b-1, a+1, ..., b-1, a+1`. Backward moves mirror these. A migration applies
//! the move to every slime simultaneously. Migrations are mutually inverse,
//! preserve the weight `Σ floor(len / 2)`, and shift the weighted sum by the weight.

use serde::{Deserialize, Serialize};

use crate::arith::mod_inverse;
use crate::code::Code;
use crate::error::{Error, Result};

/// Positions `start, start + 1, ..., start + len - 1` (mod n), `len >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicInterval {
    pub start: usize,
    pub len: usize,
}

impl CyclicInterval {
    pub fn weight(&self) -> u32 {
        (self.len / 2) as u32
    }

    pub fn positions(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).map(move |o| (self.start + o) % n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlimeDecomposition {
    pub m: u64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight: Option<u32>,
    pub slimes: Vec<CyclicInterval>,
}

/// `m_f`: the largest sum of two cyclically adjacent entries.
pub fn max_adjacent_sum(f: &Code) -> u64 {
    adjacent_sums(f).max().unwrap_or(0)
}

fn adjacent_sums(f: &Code) -> impl Iterator<Item = u64> + '_ {
    let e = f.entries();
    let n = e.len();
    (0..n).map(move |j| u64::from(e[j]) + u64::from(e[(j + 1) % n]))
}

pub fn is_valid(f: &Code) -> bool {
    let m = max_adjacent_sum(f);
    adjacent_sums(f).any(|s| s != m)
}

pub fn decompose(f: &Code) -> SlimeDecomposition {
    let n = f.n();
    let sums: Vec<u64> = adjacent_sums(f).collect();
    let m = sums.iter().copied().max().unwrap_or(0);
    // pair j joins positions j and j + 1; start scanning just after a cutoff
    let Some(cut) = sums.iter().position(|&s| s != m) else {
        return SlimeDecomposition { m, valid: false, weight: None, slimes: Vec::new() };
    };
    let mut slimes = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for step in 1..=n {
        let j = (cut + step) % n;
        if sums[j] == m {
            match run.as_mut() {
                Some((_, pairs)) => *pairs += 1,
                None => run = Some((j, 1)),
            }
        } else if let Some((start, pairs)) = run.take() {
            slimes.push(CyclicInterval { start, len: pairs + 1 });
        }
    }
    debug_assert!(run.is_none(), "the scan ends on the cutoff pair");
    slimes.sort();
    let weight = slimes.iter().map(CyclicInterval::weight).sum();
    SlimeDecomposition { m, valid: true, weight: Some(weight), slimes }
}

/// `w(f)`, the summed weight of all slimes of a valid code.
pub fn weight(f: &Code) -> Result<u32> {
    decompose(f).weight.ok_or_else(|| Error::InvalidCode(f.to_string()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

/// Change applied at `offset` within a slime of length `len`.
fn delta(direction: Direction, len: usize, offset: usize) -> i64 {
    let alternating = if offset.is_multiple_of(2) { -1 } else { 1 };
    match (direction, len.is_multiple_of(2)) {
        (Direction::Forward, true) => alternating,
        (Direction::Backward, true) => -alternating,
        // the leftmost entry stays put and the alternation shifts by one
        (Direction::Forward, false) if offset == 0 => 0,
        (Direction::Forward, false) => -alternating,
        (Direction::Backward, false) if offset == len - 1 => 0,
        (Direction::Backward, false) => -alternating,
    }
}

fn migrate(f: &Code, direction: Direction) -> Result<Code> {
    let decomposition = decompose(f);
    if !decomposition.valid {
        return Err(Error::InvalidCode(f.to_string()));
    }
    let n = f.n();
    let input = f.entries();
    let mut out = input.to_vec();
    for slime in &decomposition.slimes {
        for (offset, pos) in slime.positions(n).enumerate() {
            let moved = i64::from(input[pos]) + delta(direction, slime.len, offset);
            out[pos] = u32::try_from(moved)
                .map_err(|_| Error::MoveUnderflow { code: f.to_string(), start: slime.start })?;
        }
    }
    Ok(Code::from_parts(out, f.k()))
}

/// `φ→`: a forward move on every slime at once.
pub fn migrate_forward(f: &Code) -> Result<Code> {
    migrate(f, Direction::Forward)
}

/// `φ←`: a backward move on every slime at once.
pub fn migrate_backward(f: &Code) -> Result<Code> {
    migrate(f, Direction::Backward)
}

/// Number of forward migrations making up one application of φ: the inverse
/// of `w(f)` modulo `n`.
pub fn phi_steps(f: &Code) -> Result<u64> {
    let w = weight(f)?;
    let n = f.n();
    mod_inverse(u64::from(w), n as u64).ok_or_else(|| Error::WeightNotCoprime {
        code: f.to_string(),
        weight: w,
        n,
    })
}

/// φ: `w(f)^{-1} mod n` forward migrations, raising the weighted sum by exactly 1.
pub fn phi(f: &Code) -> Result<Code> {
    let steps = phi_steps(f)?;
    (0..steps).try_fold(f.clone(), |g, _| migrate_forward(&g))
}

/// Inverse of [`phi`]: the same number of backward migrations. The weight, and
/// so the step count, is invariant under migration.
pub fn phi_inverse(f: &Code) -> Result<Code> {
    let steps = phi_steps(f)?;
    (0..steps).try_fold(f.clone(), |g, _| migrate_backward(&g))
}
