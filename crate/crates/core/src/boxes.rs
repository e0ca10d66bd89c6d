//! Boxes of partitions indexed by the key S_Q: diagonal-hook boxes, the
//! three-part fillings built from two-part tables, and brute-force checks of
//! the box counts.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::partitions::{almost_rectangular, partition_count, stable_partitions, Key, Partition};
use crate::poset::oblak;
use crate::table::{ObBins, TableQ};
use crate::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxKind {
    QInverse,
    Dhl,
}

/// Cells stored row-major in the index tuple (i_1 varies slowest).
#[derive(Clone, Debug, Serialize)]
pub struct BoxQ {
    pub q: Partition,
    pub dims: Vec<usize>,
    pub cells: Vec<Partition>,
    pub kind: BoxKind,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Nested {
    Leaf(Partition),
    Array(Vec<Nested>),
}

fn all_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=d).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

impl BoxQ {
    fn from_fn(q: &Partition, dims: Vec<usize>, kind: BoxKind, mut f: impl FnMut(&[usize]) -> Result<Partition>) -> Result<BoxQ> {
        let cells = all_indices(&dims)
            .iter()
            .map(|idx| f(idx))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoxQ { q: q.clone(), dims, cells, kind })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn indices(&self) -> Vec<Vec<usize>> {
        all_indices(&self.dims)
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len());
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| {
            assert!((1..=d).contains(&i), "index {idx:?} outside {:?}", self.dims);
            acc * d + (i - 1)
        })
    }

    pub fn get(&self, idx: &[usize]) -> &Partition {
        &self.cells[self.offset(idx)]
    }

    pub fn partitions(&self) -> BTreeSet<Partition> {
        self.cells.iter().cloned().collect()
    }

    /// Every cell has as many parts as its index sum.
    pub fn parts_match_indices(&self) -> bool {
        self.indices()
            .iter()
            .all(|idx| self.get(idx).len() == idx.iter().sum::<usize>())
    }

    pub fn nested(&self) -> Nested {
        fn build(cells: &[Partition], dims: &[usize]) -> Nested {
            match dims.split_first() {
                None => Nested::Leaf(cells[0].clone()),
                Some((&d, rest)) => {
                    let stride: usize = rest.iter().product();
                    Nested::Array((0..d).map(|i| build(&cells[i * stride..(i + 1) * stride], rest)).collect())
                }
            }
        }
        build(&self.cells, &self.dims)
    }

    /// Floors over all but the last two indices, each a table of the last two.
    pub fn render(&self) -> String {
        let k = self.dims.len();
        let mut out = String::new();
        if k == 0 {
            return out;
        }
        let (floor_dims, plane) = if k == 1 {
            (&[][..], (1, self.dims[0]))
        } else {
            (&self.dims[..k - 2], (self.dims[k - 2], self.dims[k - 1]))
        };
        let width = self.cells.iter().map(|c| c.to_string().len()).max().unwrap_or(1);
        for floor in all_indices(floor_dims) {
            if !floor.is_empty() {
                out.push_str(&format!("floor {floor:?}\n"));
            }
            for a in 1..=plane.0 {
                let row: Vec<String> = (1..=plane.1)
                    .map(|b| {
                        let mut idx = floor.clone();
                        if k > 1 {
                            idx.push(a);
                        }
                        idx.push(b);
                        format!("{:<width$}", self.get(&idx).to_string())
                    })
                    .collect();
                out.push_str(row.join(" ").trim_end());
                out.push('\n');
            }
        }
        out
    }
}

/// (q_1 - t + 1, p~_1 + 1, ..., p~_m + 1, 1^{t-m-1}) for p~ with m parts.
fn bend(q1: usize, inner: &Partition, t: usize) -> Result<Partition> {
    let m = inner.len();
    if t <= m || t > q1 {
        return domain(format!("cannot bend a hook of {q1} around {inner} into {t} parts"));
    }
    let mut parts = vec![q1 + 1 - t];
    parts.extend(inner.parts().iter().map(|p| p + 1));
    parts.extend(std::iter::repeat_n(1, t - m - 1));
    Ok(Partition::new(parts))
}

/// DHL(Q) arranged by the key: cell (i_1, ...) has i_1 + ... parts.
pub fn dhl_box(q: &Partition) -> Result<BoxQ> {
    let key = q.key()?;
    if q.is_empty() {
        return domain("dhl box of the empty partition");
    }
    let dims = key.entries().to_vec();
    let q1 = q.parts()[0];
    let boxq = if q.len() == 1 {
        BoxQ::from_fn(q, dims, BoxKind::Dhl, |idx| bend(q1, &Partition::empty(), idx[0]))?
    } else {
        let inner = dhl_box(&Partition::new(q.parts()[1..].to_vec()))?;
        BoxQ::from_fn(q, dims, BoxKind::Dhl, |idx| {
            let p_inner = inner.get(&idx[1..]);
            bend(q1, p_inner, idx[0] + p_inner.len())
        })?
    };
    for c in &boxq.cells {
        if c.dhl() != *q {
            return domain(format!("bent partition {c} has dhl {} != {q}", c.dhl()));
        }
    }
    Ok(boxq)
}

/// The (s-1) x (r-1) x (u-r) filling of Q^{-1}(Q) for Q = (u+s, u, u-r), 2 <= s <= 4.
pub fn box_two_part_lift(q3: &Partition) -> Result<BoxQ> {
    if q3.len() != 3 || !q3.is_stable() {
        return domain(format!("{q3} is not a three-part stable partition"));
    }
    let (top, u, w) = (q3.parts()[0], q3.parts()[1], q3.parts()[2]);
    let s = top - u;
    let r = u - w;
    if !(2..=4).contains(&s) {
        return domain(format!("{q3}: q1 - q2 = {s} is outside 2..=4"));
    }
    let table = |a: usize, b: usize| TableQ::build(&Partition::new(vec![a, b]));
    let base = table(u, w)?;
    let mid = if s >= 3 { Some(table(u + s - 2, w)?) } else { None };
    let wide = if s == 4 && r > 2 { Some(table(u + 2, u - 2)?) } else { None };
    let cell = |t: &TableQ, k: usize, l: usize| t.cell(k, l).partition.clone();
    let dims = vec![s - 1, r - 1, u - r];
    BoxQ::from_fn(q3, dims, BoxKind::QInverse, |idx| {
        let (j, k, l) = (idx[0], idx[1], idx[2]);
        let p = match j {
            1 => cell(&base, k, l).with_part(top),
            2 => cell(mid.as_ref().expect("s >= 3"), k + 1, l).with_part(u + 2),
            _ => {
                let mid = mid.as_ref().expect("s = 4");
                if k == r - 1 {
                    cell(mid, r + 1, l).with_part(u + 2)
                } else {
                    let wide = wide.as_ref().expect("r > 2");
                    let pair = almost_rectangular(u + 4, 2)?;
                    if 2 * r > u + 2 {
                        cell(&base, k + 1, l).union(&pair)
                    } else if k == 1 {
                        cell(wide, 3, l).with_part(u - r + 4)
                    } else if l == u - r {
                        cell(wide, 3, u - r + k - 1).with_part(u - r + 4)
                    } else {
                        cell(&base, k + 1, l).union(&pair)
                    }
                }
            }
        };
        Ok(p)
    })
}

/// Number of index tuples in a box of `dims` with each coordinate sum.
pub fn index_sum_counts(dims: &[usize]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::from([(0usize, 1usize)]);
    for &d in dims {
        let mut next = BTreeMap::new();
        for (&s, &c) in &counts {
            for i in 1..=d {
                *next.entry(s + i).or_insert(0) += c;
            }
        }
        counts = next;
    }
    counts
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteBoxReport {
    pub q: Partition,
    pub key: Key,
    pub members: Vec<Partition>,
    pub counts_by_parts: BTreeMap<usize, usize>,
    pub expected_by_parts: BTreeMap<usize, usize>,
    pub total: usize,
    pub expected_total: usize,
    pub counts_match: bool,
    /// A closed-form box holding exactly `members`, when one is available.
    pub arranged: Option<BoxQ>,
}

impl BruteBoxReport {
    pub fn member_set(&self) -> BTreeSet<Partition> {
        self.members.iter().cloned().collect()
    }
}

fn closed_form_box(q: &Partition) -> Option<BoxQ> {
    match q.len() {
        1 => {
            let n = q.total();
            BoxQ::from_fn(q, vec![n], BoxKind::QInverse, |idx| almost_rectangular(n, idx[0])).ok()
        }
        2 => {
            let t = TableQ::build(q).ok()?;
            let dims = vec![t.rows(), t.cols()];
            BoxQ::from_fn(q, dims, BoxKind::QInverse, |idx| Ok(t.cell(idx[0], idx[1]).partition.clone())).ok()
        }
        3 => box_two_part_lift(q).ok(),
        _ => None,
    }
}

/// Ob^{-1}(Q) from precomputed bins, sorted by number of parts.
pub fn box_bruteforce_with(q: &Partition, bins: &ObBins) -> Result<BruteBoxReport> {
    let key = q.key()?;
    if bins.n != q.total() {
        return domain(format!("bins are for n={}, not |{q}|={}", bins.n, q.total()));
    }
    let mut members: Vec<Partition> = bins.preimage(q).into_iter().collect();
    members.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)));
    let mut counts_by_parts = BTreeMap::new();
    for m in &members {
        *counts_by_parts.entry(m.len()).or_insert(0) += 1;
    }
    let expected_by_parts = index_sum_counts(key.entries());
    let set: BTreeSet<_> = members.iter().cloned().collect();
    let arranged = closed_form_box(q).filter(|b| b.partitions() == set);
    Ok(BruteBoxReport {
        q: q.clone(),
        total: members.len(),
        expected_total: key.product(),
        counts_match: counts_by_parts == expected_by_parts,
        key,
        members,
        counts_by_parts,
        expected_by_parts,
        arranged,
    })
}

pub fn box_bruteforce(q: &Partition) -> Result<BruteBoxReport> {
    box_bruteforce_with(q, &ObBins::compute(q.total()))
}

/// (p(n), sum over stable Q of n of the key product).
pub fn partition_count_identity(n: usize) -> (u64, u64) {
    let rhs = stable_partitions(n)
        .iter()
        .map(|q| q.key().expect("stable").product() as u64)
        .sum();
    (partition_count(n), rhs)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoxCountsReport {
    /// Theorem-backed failures: three-part counts and lift mismatches.
    pub failures: Vec<String>,
    /// Four-or-more-part targets whose counts do not fit the key.
    pub deviations: Vec<String>,
    pub checked: usize,
}

/// Brute force against the key product for every stable Q with |Q| <= max_n,
/// and against the lifted box wherever q_1 - q_2 <= 4.
pub fn verify_box_counts(max_n: usize) -> BoxCountsReport {
    let per_n: Vec<BoxCountsReport> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let bins = ObBins::compute(n);
            let mut rep = BoxCountsReport::default();
            for q in stable_partitions(n) {
                let b = box_bruteforce_with(&q, &bins).expect("stable with matching bins");
                rep.checked += 1;
                let ok = b.counts_match && b.total == b.expected_total;
                let msg = format!("{q}: {} members, key product {}", b.total, b.expected_total);
                if q.len() >= 4 {
                    if !ok {
                        rep.deviations.push(msg);
                    }
                    continue;
                }
                if !ok {
                    rep.failures.push(msg);
                }
                if q.len() == 3 && q.parts()[0] - q.parts()[1] <= 4 {
                    match box_two_part_lift(&q) {
                        Ok(lift) if lift.partitions() == b.member_set() && lift.parts_match_indices() => {}
                        Ok(_) => rep.failures.push(format!("{q}: lifted box differs from brute force")),
                        Err(e) => rep.failures.push(format!("{q}: {e}")),
                    }
                }
            }
            rep
        })
        .collect();
    let mut out = BoxCountsReport::default();
    for r in per_n {
        out.failures.extend(r.failures);
        out.deviations.extend(r.deviations);
        out.checked += r.checked;
    }
    out
}

/// Every dhl box up to `max_n`: cells have the right dhl, part counts and are distinct.
pub fn verify_dhl_boxes(max_n: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for q in stable_partitions(n) {
            match dhl_box(&q) {
                Ok(b) => {
                    let key = q.key().expect("stable");
                    if b.len() != key.product() || b.partitions().len() != b.len() {
                        out.push(format!("{q}: {} cells, key product {}", b.partitions().len(), key.product()));
                    }
                    if !b.parts_match_indices() {
                        out.push(format!("{q}: part counts do not match indices"));
                    }
                    if b.cells.iter().any(|c| c.dhl() != q || c.total() != n) {
                        out.push(format!("{q}: a cell has the wrong dhl"));
                    }
                }
                Err(e) => out.push(format!("{q}: {e}")),
            }
        }
    }
    out
}

/// Ob of every lifted cell, for callers that want the theorem check spelled out.
pub fn lift_images_ok(b: &BoxQ) -> bool {
    b.cells.iter().all(|c| oblak(c) == b.q)
}
