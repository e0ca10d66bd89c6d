//! Generators for the loci Z(P_{k,l}) in U_B, Q = (u, u-r), and a sampler that
//! draws points on the conjectured varieties.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gfp::{check_prime, inv_mod, jordan_type};
use super::sample::{random_values, trial_rng, UBLayout, Var};
use crate::table::{all_invariants, classify_cell, table_entry, two_part, CellClass};
use crate::{Partition, Result};

pub const PIVOT_RETRIES: usize = 32;

/// X_s(k1, k2) = sum_{v=1}^{s} (a_{k1+v} b_{k2+s+1-v} - g_v g'_{s+1-v}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadric {
    pub k1: usize,
    pub k2: usize,
    pub s: usize,
}

impl Quadric {
    pub fn terms(&self) -> Vec<[Var; 4]> {
        let s = self.s;
        (1..=s)
            .map(|v| {
                [
                    Var::A(self.k1 + v),
                    Var::B(self.k2 + s + 1 - v),
                    Var::G(v),
                    Var::Gp(s + 1 - v),
                ]
            })
            .collect()
    }

    pub fn expand(&self) -> String {
        self.terms()
            .iter()
            .map(|[a, b, g, gp]| format!("({a}*{b} - {g}*{gp})"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn eval(&self, val: &dyn Fn(Var) -> u64, p: u64) -> u64 {
        self.terms().iter().fold(0, |acc, [a, b, g, gp]| {
            let pos = val(*a) * val(*b) % p;
            let neg = val(*g) * val(*gp) % p;
            (acc + pos + p - neg) % p
        })
    }
}

impl fmt::Display for Quadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}({},{})", self.s, self.k1, self.k2)
    }
}

/// A polynomial as a list of (coefficient, monomial) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly(pub Vec<(i64, Vec<Var>)>);

impl Poly {
    pub fn monomial(vars: &[Var]) -> Poly {
        Poly(vec![(1, vars.to_vec())])
    }

    fn eval(&self, val: &dyn Fn(Var) -> u64, p: u64) -> u64 {
        self.0.iter().fold(0, |acc, (c, vars)| {
            let m = vars.iter().fold(1, |m, v| m * val(*v) % p);
            let c = c.rem_euclid(p as i64) as u64;
            (acc + c * m) % p
        })
    }
}

impl From<Quadric> for Poly {
    fn from(x: Quadric) -> Poly {
        let mut out = Vec::new();
        for [a, b, g, gp] in x.terms() {
            out.push((1, vec![a, b]));
            out.push((-1, vec![g, gp]));
        }
        Poly(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, vars)) in self.0.iter().enumerate() {
            let body: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
            let body = body.join("*");
            match (i, *c) {
                (0, 1) => write!(f, "{body}")?,
                (0, -1) => write!(f, "-{body}")?,
                (0, c) => write!(f, "{c}*{body}")?,
                (_, 1) => write!(f, " + {body}")?,
                (_, -1) => write!(f, " - {body}")?,
                (_, c) if c < 0 => write!(f, " - {}*{body}", -c)?,
                (_, c) => write!(f, " + {c}*{body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocusStatus {
    /// Equations established for Q = (5,2).
    Proven,
    /// Generators from the conjectured rules, in their stated range.
    Conjectured,
    /// Same rules applied to the last column l = u-r.
    Extrapolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusSpec {
    pub q: Partition,
    pub cell: Option<(usize, usize)>,
    pub class: Option<CellClass>,
    pub t: Option<usize>,
    pub status: LocusStatus,
    pub linear: Vec<Var>,
    pub quadrics: Vec<Quadric>,
    pub nonzero: Vec<Poly>,
    pub expected: Option<Partition>,
}

impl LocusSpec {
    pub fn generator_count(&self) -> usize {
        self.linear.len() + self.quadrics.len()
    }

    pub fn generators(&self) -> Vec<String> {
        let mut out: Vec<String> = self.linear.iter().map(|v| v.to_string()).collect();
        out.extend(self.quadrics.iter().map(|x| format!("{x} = {}", x.expand())));
        out
    }

    pub fn conditions(&self) -> Vec<String> {
        self.nonzero.iter().map(|c| format!("{c} != 0")).collect()
    }
}

/// E(mu, nu) = {a_1..a_mu, b_1..b_nu}.
pub fn linear_set(mu: usize, nu: usize) -> Vec<Var> {
    (1..=mu).map(Var::A).chain((1..=nu).map(Var::B)).collect()
}

fn first_column_t(u: usize, r: usize, k: usize) -> Result<usize> {
    let inv = all_invariants(u, r)?;
    Ok(inv.iter().position(|h| k <= h.k).expect("sentinel k = r"))
}

/// Conjectured generators of I(Z(P_{k,l})) for Q = (u, u-r).
pub fn locus_spec(q: &Partition, k: usize, l: usize) -> Result<LocusSpec> {
    let (u, r) = two_part(q)?;
    let w = u - r;
    let (class, t) = classify_cell(u, r, k, l)?;
    let expected = table_entry(u, r, k, l)?;
    let mut spec = LocusSpec {
        q: q.clone(),
        cell: Some((k, l)),
        class: Some(class),
        t: Some(t),
        status: LocusStatus::Conjectured,
        linear: Vec::new(),
        quadrics: Vec::new(),
        nonzero: Vec::new(),
        expected: Some(expected),
    };
    if l == 1 {
        let t1 = first_column_t(u, r, k)?;
        spec.linear = linear_set(k - t1 - 1, t1);
        return Ok(spec);
    }
    let s = (k + l).saturating_sub(r);
    if s == 0 {
        spec.linear = match class {
            CellClass::A => linear_set(k - t - 1, t + l - 1),
            _ => linear_set(k + l - t - 2, t),
        };
    } else {
        let (k1, k2) = match class {
            CellClass::A => (k - t - 1, t + (r - k) - 1),
            _ => (r - t - 2, t),
        };
        spec.linear = linear_set(k1, k2);
        spec.quadrics = (1..=s).map(|j| Quadric { k1, k2, s: j }).collect();
    }
    if l == w {
        spec.status = LocusStatus::Extrapolated;
    }
    Ok(spec)
}

/// The table loci for Q = (5,2) with their equations and open conditions.
pub fn five_two_spec(k: usize, l: usize) -> Result<LocusSpec> {
    let q = Partition::new(vec![5, 2]);
    let mut spec = locus_spec(&q, k, l)?;
    use Var::*;
    spec.status = LocusStatus::Proven;
    spec.nonzero = match (k, l) {
        (1, 1) => vec![Poly::monomial(&[A(1), B(1)])],
        (1, 2) => vec![Poly::monomial(&[A(1)])],
        (2, 1) => vec![
            Poly::monomial(&[G(1), B(1), Gp(1)]),
            Quadric { k1: 1, k2: 0, s: 1 }.into(),
        ],
        _ => vec![Poly::monomial(&[A(2)]), Poly::monomial(&[G(1), B(1), Gp(1)])],
    };
    Ok(spec)
}

/// The intersection of the closures of Z(P_{1,2}) and Z(P_{2,1}) for Q = (5,2).
pub fn five_two_intersection_spec() -> LocusSpec {
    use Var::*;
    LocusSpec {
        q: Partition::new(vec![5, 2]),
        cell: None,
        class: None,
        t: None,
        status: LocusStatus::Proven,
        linear: vec![A(1), B(1)],
        quadrics: Vec::new(),
        nonzero: vec![Poly::monomial(&[G(1), Gp(1)])],
        expected: Some(Partition::new(vec![3, 3, 1])),
    }
}

/// Draws one point satisfying the linear generators and quadrics, and the open
/// conditions. Returns None when every retry hit a zero pivot or a closed condition.
pub fn sample_locus_point(spec: &LocusSpec, layout: &UBLayout, p: u64, rng: &mut impl Rng) -> Option<Vec<u64>> {
    'retry: for _ in 0..PIVOT_RETRIES {
        let mut values = random_values(layout, p, rng);
        for v in &spec.linear {
            if let Some(i) = layout.index_of(*v) {
                values[i] = 0;
            }
        }
        for x in &spec.quadrics {
            let cur = {
                let val = |v: Var| layout.index_of(v).map_or(0, |i| values[i]);
                x.eval(&val, p)
            };
            let pivots = [
                (Var::B(x.k2 + x.s), Var::A(x.k1 + 1), 1u64),
                (Var::Gp(x.s), Var::G(1), p - 1),
            ];
            let mut solved = false;
            for (pv, cv, sign) in pivots {
                let (Some(pi), Some(ci)) = (layout.index_of(pv), layout.index_of(cv)) else {
                    continue;
                };
                let coef = values[ci] * sign % p;
                if coef == 0 {
                    continue;
                }
                let shift = cur * inv_mod(coef, p) % p;
                values[pi] = (values[pi] + p - shift) % p;
                solved = true;
                break;
            }
            if !solved {
                continue 'retry;
            }
        }
        let val = |v: Var| layout.index_of(v).map_or(0, |i| values[i]);
        if spec.nonzero.iter().any(|c| c.eval(&val, p) == 0) {
            continue;
        }
        return Some(values);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusReport {
    pub q: Partition,
    pub cell: Option<(usize, usize)>,
    pub status: LocusStatus,
    pub generators: Vec<String>,
    pub conditions: Vec<String>,
    pub sample_count: usize,
    pub failed_samples: usize,
    pub type_histogram: BTreeMap<String, usize>,
    pub modal_type: Option<String>,
    pub modal_count: usize,
    pub expected: Option<String>,
    pub matches_table: bool,
}

impl LocusReport {
    /// Modal type equals the expected one on at least `num/den` of the requested samples.
    pub fn agrees(&self, num: usize, den: usize) -> bool {
        self.matches_table && self.modal_count * den >= num * self.sample_count
    }
}

pub fn locus_sample_check(spec: &LocusSpec, p: u64, trials: usize, seed: u64) -> Result<LocusReport> {
    check_prime(p, spec.q.total())?;
    let layout = UBLayout::new(&spec.q);
    let mut hist: BTreeMap<Partition, usize> = BTreeMap::new();
    let mut failed = 0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        match sample_locus_point(spec, &layout, p, &mut rng) {
            Some(values) => {
                let jt = jordan_type(&layout.matrix(&values, p))?;
                *hist.entry(jt).or_insert(0) += 1;
            }
            None => failed += 1,
        }
    }
    let modal = hist.iter().max_by_key(|(_, &c)| c).map(|(q, &c)| (q.clone(), c));
    let matches_table = match (&modal, &spec.expected) {
        (Some((m, _)), Some(e)) => m == e,
        _ => false,
    };
    Ok(LocusReport {
        q: spec.q.clone(),
        cell: spec.cell,
        status: spec.status,
        generators: spec.generators(),
        conditions: spec.conditions(),
        sample_count: trials,
        failed_samples: failed,
        type_histogram: hist.iter().map(|(q, c)| (q.to_string(), *c)).collect(),
        modal_type: modal.as_ref().map(|(q, _)| q.to_string()),
        modal_count: modal.map_or(0, |(_, c)| c),
        expected: spec.expected.as_ref().map(|e| e.to_string()),
        matches_table,
    })
}

/// Reports for the four table cells of (5,2) followed by the (3,3,1) intersection.
pub fn five_two_reports(p: u64, trials: usize, seed: u64) -> Result<Vec<LocusReport>> {
    let mut out = Vec::new();
    for (k, l) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        out.push(locus_sample_check(&five_two_spec(k, l)?, p, trials, seed)?);
    }
    out.push(locus_sample_check(&five_two_intersection_spec(), p, trials, seed)?);
    Ok(out)
}

/// Whether the (5,2) reports meet 99/100 per cell and 100/100 on the intersection.
pub fn five_two_passes(reports: &[LocusReport]) -> bool {
    reports.len() == 5
        && reports[..4].iter().all(|r| r.agrees(99, 100))
        && reports[4].agrees(1, 1)
}

/// Sampling reports for every cell of T(Q).
pub fn survey_loci(q: &Partition, p: u64, trials: usize, seed: u64) -> Result<Vec<LocusReport>> {
    let (u, r) = two_part(q)?;
    let w = u - r;
    let mut out = Vec::new();
    for k in 1..r {
        for l in 1..=w {
            out.push(locus_sample_check(&locus_spec(q, k, l)?, p, trials, seed)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordanlab::gfp::DEFAULT_PRIME as P;

    fn q(u: usize, w: usize) -> Partition {
        Partition::new(vec![u, w])
    }

    #[test]
    fn five_three_examples() {
        let s = locus_spec(&q(5, 3), 1, 2).unwrap();
        assert!(s.linear.is_empty());
        assert_eq!(s.quadrics, vec![Quadric { k1: 0, k2: 0, s: 1 }]);
        assert_eq!(s.quadrics[0].expand(), "(a1*b1 - g1*g'1)");
        let s = locus_spec(&q(5, 3), 1, 3).unwrap();
        assert_eq!(s.quadrics.len(), 2);
        assert_eq!(s.quadrics[1].expand(), "(a1*b2 - g1*g'2) + (a2*b1 - g2*g'1)");
        assert_eq!(s.status, LocusStatus::Extrapolated);
    }

    #[test]
    fn five_two_generators() {
        use Var::*;
        assert_eq!(locus_spec(&q(5, 2), 1, 1).unwrap().generator_count(), 0);
        assert_eq!(locus_spec(&q(5, 2), 1, 2).unwrap().linear, vec![B(1)]);
        let s21 = locus_spec(&q(5, 2), 2, 1).unwrap();
        assert_eq!(s21.linear, vec![A(1)]);
        assert!(s21.quadrics.is_empty());
        let s22 = locus_spec(&q(5, 2), 2, 2).unwrap();
        assert_eq!(s22.linear, vec![A(1)]);
        assert_eq!(s22.quadrics, vec![Quadric { k1: 1, k2: 0, s: 1 }]);
        assert_eq!(s22.quadrics[0].expand(), "(a2*b1 - g1*g'1)");
        let c = five_two_spec(2, 1).unwrap();
        assert_eq!(c.conditions(), ["g1*b1*g'1 != 0", "a2*b1 - g1*g'1 != 0"]);
    }

    #[test]
    fn generator_counts_follow_the_pattern() {
        for u in 4..=16 {
            for r in 2..u {
                let w = u - r;
                for k in 1..r {
                    for l in 1..=w {
                        let s = locus_spec(&q(u, w), k, l).unwrap();
                        assert_eq!(s.generator_count(), k + l - 2, "({u},{w}) cell ({k},{l})");
                        let lin = (k + l - 2).min(r - 2);
                        assert_eq!(s.linear.len(), lin, "({u},{w}) cell ({k},{l})");
                        for x in &s.quadrics {
                            assert!(x.k1 + x.s < u && x.k2 + x.s < w);
                        }
                        assert_eq!(s.status == LocusStatus::Extrapolated, l == w && l > 1);
                    }
                }
            }
        }
    }

    #[test]
    fn five_two_sampling() {
        let reports = five_two_reports(P, 100, 5).unwrap();
        for r in &reports {
            assert!(r.matches_table, "{r:?}");
        }
        assert!(five_two_passes(&reports));
        assert_eq!(reports[4].type_histogram.get("(3,3,1)"), Some(&100));
    }

    #[test]
    fn sampled_points_satisfy_equations() {
        let spec = locus_spec(&q(7, 4), 2, 2).unwrap();
        assert!(!spec.quadrics.is_empty());
        let layout = UBLayout::new(&spec.q);
        let mut rng = trial_rng(9, 0);
        for _ in 0..50 {
            let values = sample_locus_point(&spec, &layout, P, &mut rng).unwrap();
            let val = |v: Var| layout.index_of(v).map_or(0, |i| values[i]);
            for v in &spec.linear {
                assert_eq!(val(*v), 0);
            }
            for x in &spec.quadrics {
                assert_eq!(Poly::from(*x).eval(&val, P), 0);
            }
        }
    }
}
