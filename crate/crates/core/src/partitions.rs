//! Partitions, almost rectangular blocks, keys and diagonal hooks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{domain, Error, Result};

/// Totals beyond this are rejected by the constructors that allocate per unit.
pub const MAX_TOTAL: usize = 1_000_000;

/// A weakly decreasing sequence of positive integers.
///
/// Both the part list and the multiplicity map are kept; every constructor
/// sorts and drops zeros, so two partitions are equal iff their parts are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "PartitionJson", try_from = "PartitionJson")]
pub struct Partition {
    parts: Vec<usize>,
    mult: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    parts: Vec<usize>,
}

impl From<Partition> for PartitionJson {
    fn from(p: Partition) -> Self {
        PartitionJson { parts: p.parts }
    }
}

impl TryFrom<PartitionJson> for Partition {
    type Error = Error;
    fn try_from(j: PartitionJson) -> Result<Self> {
        if j.parts.windows(2).any(|w| w[0] < w[1]) || j.parts.contains(&0) {
            return Err(Error::Parse(format!(
                "parts must be positive and weakly decreasing: {:?}",
                j.parts
            )));
        }
        Ok(Partition::new(j.parts))
    }
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let mut mult = BTreeMap::new();
        for &p in &parts {
            *mult.entry(p).or_insert(0) += 1;
        }
        Partition { parts, mult }
    }

    pub fn empty() -> Self {
        Partition::new(Vec::new())
    }

    /// Builds `(... i^{n_i} ...)` from `(i, n_i)` pairs; repeated values add up.
    pub fn from_multiplicities<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        let mut parts = Vec::new();
        for (value, count) in pairs {
            parts.extend(std::iter::repeat_n(value, count));
        }
        Partition::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn largest(&self) -> Option<usize> {
        self.parts.first().copied()
    }

    pub fn smallest(&self) -> Option<usize> {
        self.parts.last().copied()
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.mult.get(&i).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<usize, usize> {
        &self.mult
    }

    /// The set S_P, largest first.
    pub fn distinct_parts(&self) -> Vec<usize> {
        self.mult.keys().rev().copied().collect()
    }

    pub fn is_almost_rectangular(&self) -> bool {
        match (self.largest(), self.smallest()) {
            (Some(a), Some(b)) => a - b <= 1,
            _ => true,
        }
    }

    /// Minimal number of almost rectangular pieces covering P.
    ///
    /// An almost rectangular piece uses the values {a} or {a, a-1}, so this is a
    /// minimal interval cover of S_P, which the greedy scan from the top finds.
    pub fn r_p(&self) -> usize {
        ar_blocks(&self.distinct_parts()).len()
    }

    pub fn is_stable(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1] + 2)
    }

    /// True iff `other <= self` in the dominance order.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        bruhat_leq(self, other)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.largest().unwrap_or(0);
        let cols = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
            .collect();
        Partition::new(cols)
    }

    /// Side of the Durfee square.
    pub fn durfee_rank(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p > *i)
            .count()
    }

    /// Diagonal hook lengths (h_11, ..., h_dd).
    pub fn dhl(&self) -> Partition {
        let conj = self.conjugate();
        let d = self.durfee_rank();
        let hooks = (0..d)
            .map(|i| (self.parts[i] - i - 1) + (conj.parts[i] - i - 1) + 1)
            .collect();
        Partition::new(hooks)
    }

    pub fn key(&self) -> Result<Key> {
        if !self.is_stable() {
            return domain(format!("{self} is not stable, so it has no key"));
        }
        let k = self.len();
        let mut entries = Vec::with_capacity(k);
        for i in 0..k {
            if i + 1 < k {
                entries.push(self.parts[i] - self.parts[i + 1] - 1);
            } else {
                entries.push(self.parts[i]);
            }
        }
        Ok(Key(entries))
    }

    /// Partition with the parts of `self` followed by those of `other`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::new(parts)
    }

    /// Prepends a part, which need not be the largest.
    pub fn with_part(&self, part: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts.push(part);
        Partition::new(parts)
    }

    /// Rendering in `[n]^k` blocks, one block per almost rectangular piece.
    pub fn to_ar_string(&self) -> String {
        let blocks = ar_blocks(&self.distinct_parts());
        let rendered: Vec<String> = blocks
            .iter()
            .map(|vals| {
                let count: usize = vals.iter().map(|&v| self.multiplicity(v)).sum();
                let total: usize = vals.iter().map(|&v| v * self.multiplicity(v)).sum();
                render_block(total, count)
            })
            .collect();
        format!("({})", rendered.join(","))
    }
}

pub(crate) fn render_block(total: usize, count: usize) -> String {
    if count == 1 {
        total.to_string()
    } else {
        format!("[{total}]^{count}")
    }
}

/// Greedy interval cover of a descending set of distinct values.
fn ar_blocks(distinct_desc: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < distinct_desc.len() {
        let a = distinct_desc[i];
        if i + 1 < distinct_desc.len() && distinct_desc[i + 1] + 1 == a {
            blocks.push(vec![a, a - 1]);
            i += 2;
        } else {
            blocks.push(vec![a]);
            i += 1;
        }
    }
    blocks
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts comma-separated tokens, optionally parenthesised. A token is a
    /// part `5`, a repeated part `3^4` or `3^{4}`, or a block `[10]^4`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(&compact);
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for token in inner.split(',') {
            parse_token(token, &mut parts)?;
        }
        let total: usize = parts.iter().sum();
        if total > MAX_TOTAL {
            return Err(Error::Parse(format!("total {total} exceeds {MAX_TOTAL}")));
        }
        Ok(Partition::new(parts))
    }
}

fn parse_num(s: &str, whole: &str) -> Result<usize> {
    let s = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .unwrap_or(s);
    s.parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad number {s:?} in token {whole:?}")))
}

fn parse_token(token: &str, out: &mut Vec<usize>) -> Result<()> {
    if token.is_empty() {
        return Err(Error::Parse("empty token".into()));
    }
    let (base, exp) = match token.split_once('^') {
        Some((b, e)) => (b, Some(parse_num(e, token)?)),
        None => (token, None),
    };
    if let Some(n) = base.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        let n = parse_num(n, token)?;
        let k = exp.unwrap_or(1);
        if n > MAX_TOTAL {
            return Err(Error::Parse(format!("block [{n}] too large")));
        }
        let ar = almost_rectangular(n, k).map_err(|e| Error::Parse(e.to_string()))?;
        out.extend_from_slice(ar.parts());
    } else {
        let v = parse_num(base, token)?;
        if v == 0 {
            return Err(Error::Parse(format!("zero part in token {token:?}")));
        }
        let m = exp.unwrap_or(1);
        if m > MAX_TOTAL {
            return Err(Error::Parse(format!("multiplicity {m} too large")));
        }
        out.extend(std::iter::repeat_n(v, m));
    }
    Ok(())
}

/// `[n]^k`: the unique k-part partition of n with parts differing by at most one.
pub fn almost_rectangular(n: usize, k: usize) -> Result<Partition> {
    if k == 0 || k > n {
        return domain(format!("[{n}]^{k} needs 1 <= k <= n"));
    }
    if n > MAX_TOTAL {
        return domain(format!("[{n}]^{k}: total too large"));
    }
    let q = n / k;
    let r = n % k;
    Ok(Partition::from_multiplicities([(q + 1, r), (q, k - r)]))
}

/// True iff every prefix sum of `p2` is at most the matching prefix sum of `p`,
/// over the first min(len) positions; that is, `p2 <= p`.
pub fn bruhat_leq(p: &Partition, p2: &Partition) -> Result<bool> {
    if p.total() != p2.total() {
        return domain(format!("{p} and {p2} partition different totals"));
    }
    let m = p.len().min(p2.len());
    let (mut s, mut s2) = (0, 0);
    for i in 0..m {
        s += p.parts[i];
        s2 += p2.parts[i];
        if s2 > s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The key S_Q of a stable partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Key(Vec<usize>);

impl Key {
    pub fn new(entries: Vec<usize>) -> Result<Key> {
        if entries.contains(&0) {
            return domain(format!("key entries must be positive: {entries:?}"));
        }
        Ok(Key(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> usize {
        self.0.iter().product()
    }

    pub fn to_partition(&self) -> Partition {
        key_to_partition(self)
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// q_i = (s_i + ... + s_k) + k - i.
pub fn key_to_partition(key: &Key) -> Partition {
    let k = key.0.len();
    let mut parts = Vec::with_capacity(k);
    let mut tail = 0;
    for i in (0..k).rev() {
        tail += key.0[i];
        parts.push(tail + (k - 1 - i));
    }
    Partition::new(parts)
}

/// Partitions of n in reverse lexicographic order, starting at (n).
pub fn enumerate_partitions(n: usize) -> PartitionIter {
    PartitionIter {
        next: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        let mut a = cur.clone();
        let mut rem = 0;
        while a.last() == Some(&1) {
            a.pop();
            rem += 1;
        }
        if let Some(x) = a.pop() {
            rem += x;
            let y = x - 1;
            while rem >= y {
                a.push(y);
                rem -= y;
            }
            if rem > 0 {
                a.push(rem);
            }
            self.next = Some(a);
        }
        Some(Partition {
            mult: cur.iter().fold(BTreeMap::new(), |mut m, &p| {
                *m.entry(p).or_insert(0) += 1;
                m
            }),
            parts: cur,
        })
    }
}

/// Stable partitions of n, largest first part first.
pub fn stable_partitions(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, cap: usize, acc: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::new(acc.clone()));
            return;
        }
        for first in (1..=rem.min(cap)).rev() {
            acc.push(first);
            rec(rem - first, first.saturating_sub(2), acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// p(n) by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i128; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut acc = 0i128;
        let mut j: usize = 1;
        loop {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * p[m - g1];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                acc += sign * p[m - g2];
            }
            j += 1;
        }
        p[m] = acc;
    }
    p[n] as u64
}
