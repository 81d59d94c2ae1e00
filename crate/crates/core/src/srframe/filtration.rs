use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{FrameError, SRFrame};
use crate::linalg::{Coords, IncrementalBasis};
use crate::symcore::{Rational, VectorField};

/// Right-nested bracket word `X_I = [X_{i_1}, [X_{i_2}, ... X_{i_k}]]` (zero-based indices).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BracketWord(pub Vec<usize>);

impl BracketWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.0.len();
        if k == 1 {
            return write!(f, "X{}", self.0[0] + 1);
        }
        for i in &self.0[..k - 1] {
            write!(f, "[X{},", i + 1)?;
        }
        write!(f, "X{}", self.0[k - 1] + 1)?;
        for _ in 0..k - 1 {
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for BracketWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All bracket words of length `<= depth` with their fields, ordered by
/// length and then lexicographically.
pub fn bracket_words(frame: &SRFrame, depth: usize) -> Result<Vec<Vec<(BracketWord, VectorField)>>, FrameError> {
    let mut levels: Vec<Vec<(BracketWord, VectorField)>> = Vec::new();
    if depth == 0 {
        return Ok(levels);
    }
    levels.push(
        frame
            .fields()
            .iter()
            .enumerate()
            .map(|(i, f)| (BracketWord(vec![i]), f.clone()))
            .collect(),
    );
    for _ in 1..depth {
        let prev = levels.last().expect("non-empty");
        let next: Result<Vec<_>, FrameError> = frame
            .fields()
            .iter()
            .enumerate()
            .flat_map(|(i, xi)| {
                prev.iter().map(move |(w, f)| {
                    let mut word = vec![i];
                    word.extend_from_slice(&w.0);
                    Ok((BracketWord(word), xi.bracket(f)?))
                })
            })
            .collect();
        levels.push(next?);
    }
    Ok(levels)
}

/// Flag `D^1_x ⊂ D^2_x ⊂ ...` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub point: Vec<Rational>,
    /// `k_i(x) = dim D^i_x` for `i = 1..=step`.
    pub dims: Vec<usize>,
    pub step: usize,
    /// Greedy basis of `D^i_x`, cumulative: `bases[i-1]` has `k_i` words.
    pub bases: Vec<Vec<BracketWord>>,
    pub bracket_generating: bool,
    /// True when `max_depth` was reached before `k_i = n`.
    pub depth_limited: bool,
}

fn filtration_from_levels(
    levels: &[Vec<(BracketWord, VectorField)>],
    n: usize,
    x: &[Rational],
) -> Filtration {
    let mut basis = IncrementalBasis::new();
    let mut chosen: Vec<BracketWord> = Vec::new();
    let mut dims = Vec::new();
    let mut bases = Vec::new();
    for level in levels {
        if basis.rank() < n {
            for (w, f) in level {
                if basis.rank() == n {
                    break;
                }
                if basis.insert(&f.eval(x).coords()) {
                    chosen.push(w.clone());
                }
            }
        }
        dims.push(basis.rank());
        bases.push(chosen.clone());
        if basis.rank() == n {
            break;
        }
    }
    let generating = dims.last().copied() == Some(n);
    Filtration {
        point: x.to_vec(),
        step: dims.len(),
        dims,
        bases,
        bracket_generating: generating,
        depth_limited: !generating,
    }
}

/// Filtration at `x`, evaluating every bracket word of length `<= max_depth`.
///
/// With `require_generating`, a frame that does not reach `k = n` is an error.
pub fn filtration_at(
    frame: &SRFrame,
    x: &[Rational],
    max_depth: usize,
    require_generating: bool,
) -> Result<Filtration, FrameError> {
    if max_depth == 0 {
        return Err(FrameError::InvalidArgument("max_depth must be at least 1".into()));
    }
    frame.check_point(x)?;
    let levels = bracket_words(frame, max_depth)?;
    let filt = filtration_from_levels(&levels, frame.dim(), x);
    if require_generating && !filt.bracket_generating {
        return Err(FrameError::NotBracketGenerating { depth: max_depth, dims: filt.dims });
    }
    Ok(filt)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketGeneration {
    pub generating: bool,
    /// Set when the answer is `false` only because the depth ran out.
    pub depth_limited: bool,
    pub dims: Vec<usize>,
}

pub fn is_bracket_generating(frame: &SRFrame, x: &[Rational], max_depth: usize) -> Result<BracketGeneration, FrameError> {
    let f = filtration_at(frame, x, max_depth, false)?;
    Ok(BracketGeneration { generating: f.bracket_generating, depth_limited: f.depth_limited, dims: f.dims })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Regular,
    Singular,
    Inconclusive,
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointClass::Regular => "regular",
            PointClass::Singular => "singular",
            PointClass::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    #[serde(serialize_with = "crate::report::ser_rationals")]
    pub point: Vec<Rational>,
    pub dims: Vec<usize>,
    pub depth_limited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub class: PointClass,
    pub base: Filtration,
    pub probes: Vec<ProbeResult>,
    /// Index of the first probe whose dims differ from the base point.
    pub witness: Option<usize>,
}

/// Dyadic rational offsets in `[-radius, radius]^n`, never all zero.
fn probe_points(x: &[Rational], radius: &Rational, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    const BITS: u32 = 16;
    let scale = Rational::from_integer(BigInt::from(1u64 << BITS));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 1i64 << BITS;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let ks: Vec<i64> = x.iter().map(|_| rng.gen_range(-span..=span)).collect();
        if ks.iter().all(|&k| k == 0) {
            continue;
        }
        out.push(
            x.iter()
                .zip(&ks)
                .map(|(xi, &k)| xi + radius * Rational::from_integer(BigInt::from(k)) / &scale)
                .collect(),
        );
    }
    out
}

/// Compares the filtration at `x` with those at seeded random points within `radius`.
///
/// A `Singular` answer is a certificate (two exact filtrations differ). A
/// `Regular` answer is sampling evidence. `Inconclusive` means every probe
/// agreed but some filtration was cut off by `max_depth`.
pub fn classify_point(
    frame: &SRFrame,
    x: &[Rational],
    radius: &Rational,
    probe_count: usize,
    max_depth: usize,
    seed: u64,
) -> Result<Classification, FrameError> {
    if probe_count == 0 {
        return Err(FrameError::InvalidArgument("probe_count must be at least 1".into()));
    }
    if max_depth == 0 {
        return Err(FrameError::InvalidArgument("max_depth must be at least 1".into()));
    }
    frame.check_point(x)?;
    let levels = bracket_words(frame, max_depth)?;
    let n = frame.dim();
    let base = filtration_from_levels(&levels, n, x);
    let probes: Vec<ProbeResult> = probe_points(x, radius, probe_count, seed)
        .into_par_iter()
        .map(|p| {
            let f = filtration_from_levels(&levels, n, &p);
            ProbeResult { point: p, dims: f.dims, depth_limited: f.depth_limited }
        })
        .collect();
    let witness = probes.iter().position(|p| p.dims != base.dims);
    let class = if witness.is_some() {
        PointClass::Singular
    } else if base.depth_limited || probes.iter().any(|p| p.depth_limited) {
        PointClass::Inconclusive
    } else {
        PointClass::Regular
    };
    Ok(Classification { class, base, probes, witness })
}
