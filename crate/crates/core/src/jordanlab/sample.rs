//! Coordinates on U_B, random elements, Monte-Carlo Q(P) and the weighted scaling check.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gfp::{check_prime, jordan_type, pow_mod, MatrixGFp};
use crate::partitions::{bruhat_leq, enumerate_partitions};
use crate::poset::oblak;
use crate::{Partition, Result};

/// Named coordinates for a two-part base (u, u-r); a single-part base only uses `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    A(usize),
    B(usize),
    G(usize),
    Gp(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(i) => write!(f, "a{i}"),
            Var::B(i) => write!(f, "b{i}"),
            Var::G(i) => write!(f, "g{i}"),
            Var::Gp(i) => write!(f, "g'{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub size: usize,
    pub copy: usize,
    pub offset: usize,
}

/// One free coordinate: the d-th shift from block `dom` into block `cod`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coordinate {
    pub label: String,
    pub dom: usize,
    pub cod: usize,
    pub d: usize,
    pub weight: i64,
    pub var: Option<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UBLayout {
    pub q: Partition,
    pub blocks: Vec<Block>,
    pub coords: Vec<Coordinate>,
}

impl UBLayout {
    pub fn new(q: &Partition) -> UBLayout {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for &size in &q.distinct_parts() {
            for copy in 1..=q.multiplicity(size) {
                blocks.push(Block { size, copy, offset });
                offset += size;
            }
        }
        let two = q.len() == 2 && q.distinct_parts().len() == 2;
        let r = if two { q.parts()[0] - q.parts()[1] } else { 0 };
        let mut coords = Vec::new();
        for (di, dom) in blocks.iter().enumerate() {
            for (ci, cod) in blocks.iter().enumerate() {
                let (i, j) = (dom.size, cod.size);
                let lo = i.saturating_sub(j);
                for d in lo..i {
                    if i == j && d == 0 && cod.copy <= dom.copy {
                        continue;
                    }
                    let var = if two {
                        Some(match (di, ci) {
                            (0, 0) => Var::A(d),
                            (1, 1) => Var::B(d),
                            (1, 0) => Var::G(d + 1),
                            _ => Var::Gp(d + 1 - r),
                        })
                    } else if blocks.len() == 1 {
                        Some(Var::A(d))
                    } else {
                        None
                    };
                    let label = match var {
                        Some(v) => v.to_string(),
                        None => format!("c[{}.{}>{}.{}]{}", i, dom.copy, j, cod.copy, d),
                    };
                    let weight = j as i64 - i as i64 + 2 * d as i64;
                    coords.push(Coordinate { label, dom: di, cod: ci, d, weight, var });
                }
            }
        }
        if two {
            coords.sort_by_key(|c| c.var);
        }
        UBLayout { q: q.clone(), blocks, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn n(&self) -> usize {
        self.q.total()
    }

    pub fn labels(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.label.clone()).collect()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.coords.iter().map(|c| c.weight).collect()
    }

    pub fn index_of(&self, v: Var) -> Option<usize> {
        self.coords.iter().position(|c| c.var == Some(v))
    }

    pub fn matrix(&self, values: &[u64], p: u64) -> MatrixGFp {
        let mut m = MatrixGFp::zero(self.n(), p);
        for (c, &v) in self.coords.iter().zip(values) {
            if v == 0 {
                continue;
            }
            let dom = self.blocks[c.dom];
            let cod = self.blocks[c.cod];
            for x in 0..cod.size {
                if x + c.d < dom.size {
                    m.set(cod.offset + x, dom.offset + x + c.d, v);
                }
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UBSample {
    pub q_base: Partition,
    pub labels: Vec<String>,
    pub values: Vec<u64>,
    pub matrix: MatrixGFp,
}

impl UBSample {
    pub fn assignment(&self) -> BTreeMap<String, u64> {
        self.labels.iter().cloned().zip(self.values.iter().copied()).collect()
    }
}

/// Independent stream per trial, derived from (seed, trial).
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_values(layout: &UBLayout, p: u64, rng: &mut impl Rng) -> Vec<u64> {
    (0..layout.dim()).map(|_| rng.gen_range(0..p)).collect()
}

pub fn sample_ub_with(layout: &UBLayout, p: u64, rng: &mut impl Rng) -> UBSample {
    let values = random_values(layout, p, rng);
    UBSample {
        q_base: layout.q.clone(),
        labels: layout.labels(),
        matrix: layout.matrix(&values, p),
        values,
    }
}

pub fn sample_ub(q_base: &Partition, p: u64, seed: u64) -> Result<UBSample> {
    check_prime(p, q_base.total())?;
    let layout = UBLayout::new(q_base);
    Ok(sample_ub_with(&layout, p, &mut trial_rng(seed, 0)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McImage {
    pub partition: Partition,
    pub image: Partition,
    pub samples: Vec<Partition>,
    pub incomparable: Vec<(Partition, Partition)>,
}

impl McImage {
    pub fn flagged(&self) -> bool {
        !self.incomparable.is_empty()
    }
}

pub fn mc_image(p_shape: &Partition, p: u64, trials: usize, seed: u64) -> Result<McImage> {
    check_prime(p, p_shape.total())?;
    if trials == 0 {
        return crate::domain("trials must be at least 1");
    }
    let layout = UBLayout::new(p_shape);
    let mut samples = Vec::with_capacity(trials);
    for t in 0..trials {
        let s = sample_ub_with(&layout, p, &mut trial_rng(seed, t as u64));
        samples.push(jordan_type(&s.matrix)?);
    }
    Ok(bruhat_max(p_shape, samples))
}

fn bruhat_max(p_shape: &Partition, samples: Vec<Partition>) -> McImage {
    let dominates_all =
        |c: &Partition| samples.iter().all(|s| bruhat_leq(c, s).unwrap_or(false));
    let top = samples.iter().find(|c| dominates_all(c)).cloned();
    let mut incomparable = Vec::new();
    let image = match top {
        Some(t) => t,
        None => {
            for (i, a) in samples.iter().enumerate() {
                for b in &samples[i + 1..] {
                    if !bruhat_leq(a, b).unwrap_or(false) && !bruhat_leq(b, a).unwrap_or(false) {
                        incomparable.push((a.clone(), b.clone()));
                    }
                }
            }
            samples.iter().max_by(|a, b| a.parts().cmp(b.parts())).cloned().unwrap()
        }
    };
    McImage { partition: p_shape.clone(), image, samples, incomparable }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct McOblakReport {
    pub checked: usize,
    pub failures: Vec<String>,
    pub deviations: Vec<String>,
    pub flagged: Vec<String>,
}

impl McOblakReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compares mc_image with oblak for every P of n <= max_n.
/// A mismatch with r_P <= 3 is a failure; with r_P >= 4 it is a reported deviation.
pub fn verify_mc_oblak(max_n: usize, p: u64, trials: usize, seed: u64) -> Result<McOblakReport> {
    check_prime(p, max_n)?;
    let all: Vec<Partition> = (1..=max_n).flat_map(enumerate_partitions).collect();
    let results: Vec<Result<(Partition, McImage, Partition)>> = all
        .par_iter()
        .map(|q| {
            let mc = mc_image(q, p, trials, seed)?;
            Ok((q.clone(), mc, oblak(q)))
        })
        .collect();
    let mut report = McOblakReport::default();
    for res in results {
        let (q, mc, ob) = res?;
        report.checked += 1;
        if mc.flagged() {
            report.flagged.push(format!("{q}: incomparable samples {:?}", mc.incomparable));
        }
        if mc.image != ob {
            let line = format!("{q}: matrix {} vs oblak {ob} (r_P = {})", mc.image, q.r_p());
            if q.r_p() <= 3 {
                report.failures.push(line);
            } else {
                report.deviations.push(line);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub q_base: Partition,
    pub weights: BTreeMap<String, i64>,
    pub pairs: usize,
    pub passes: usize,
    pub failures: Vec<String>,
}

impl ScalingReport {
    pub fn passed(&self) -> bool {
        self.passes == self.pairs
    }
}

/// Scales each coordinate by lambda^weight and compares Jordan types.
pub fn scaling_invariance_check(
    q_base: &Partition,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<ScalingReport> {
    check_prime(p, q_base.total())?;
    let layout = UBLayout::new(q_base);
    let mut passes = 0;
    let mut failures = Vec::new();
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let sample = sample_ub_with(&layout, p, &mut rng);
        let lambda = rng.gen_range(1..p);
        let scaled: Vec<u64> = sample
            .values
            .iter()
            .zip(&layout.coords)
            .map(|(&v, c)| v * weighted_power(lambda, c.weight, p) % p)
            .collect();
        let before = jordan_type(&sample.matrix)?;
        let after = jordan_type(&layout.matrix(&scaled, p))?;
        if before == after {
            passes += 1;
        } else {
            failures.push(format!("trial {t}, lambda {lambda}: {before} became {after}"));
        }
    }
    let weights = layout.coords.iter().map(|c| (c.label.clone(), c.weight)).collect();
    Ok(ScalingReport { q_base: q_base.clone(), weights, pairs: trials, passes, failures })
}

fn weighted_power(lambda: u64, w: i64, p: u64) -> u64 {
    let e = w.rem_euclid((p - 1) as i64) as u64;
    pow_mod(lambda, e, p)
}

/// Number of free coordinates of U_B.
pub fn free_coordinate_count(q_base: &Partition) -> usize {
    UBLayout::new(q_base).dim()
}
