//! Dense square matrices over a prime field GF(p), p < 2^32.

use serde::{Deserialize, Serialize};

use crate::{domain, Partition, Result};

pub const DEFAULT_PRIME: u64 = 65537;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Accepts p only if it is prime, fits in 32 bits and exceeds `n`.
pub fn check_prime(p: u64, n: usize) -> Result<()> {
    if p >= 1 << 32 {
        return domain(format!("prime {p} exceeds 2^32"));
    }
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if p <= n as u64 {
        return domain(format!("prime {p} must exceed the matrix size {n}"));
    }
    Ok(())
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixGFp {
    n: usize,
    p: u64,
    data: Vec<u64>,
}

impl MatrixGFp {
    pub fn zero(n: usize, p: u64) -> MatrixGFp {
        MatrixGFp { n, p, data: vec![0; n * n] }
    }

    pub fn identity(n: usize, p: u64) -> MatrixGFp {
        let mut m = MatrixGFp::zero(n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], p: u64) -> MatrixGFp {
        let n = rows.len();
        let mut m = MatrixGFp::zero(n, p);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.p;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &MatrixGFp) -> MatrixGFp {
        assert_eq!(self.n, other.n);
        assert_eq!(self.p, other.p);
        let (n, p) = (self.n, self.p);
        let mut out = MatrixGFp::zero(n, p);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j];
                    if b != 0 {
                        let c = &mut out.data[i * n + j];
                        *c = (*c + a * b) % p;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &MatrixGFp) -> MatrixGFp {
        let p = self.p;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        MatrixGFp { n: self.n, p, data }
    }

    pub fn commutes_with(&self, other: &MatrixGFp) -> bool {
        self.mul(other) == other.mul(self)
    }

    pub fn rank(&self) -> usize {
        let (n, p) = (self.n, self.p);
        let mut m = self.data.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(piv) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            if piv != rank {
                for j in 0..n {
                    m.swap(piv * n + j, rank * n + j);
                }
            }
            let inv = inv_mod(m[rank * n + col], p);
            for j in col..n {
                m[rank * n + j] = m[rank * n + j] * inv % p;
            }
            for r in rank + 1..n {
                let f = m[r * n + col];
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let s = f * m[rank * n + j] % p;
                    m[r * n + j] = (m[r * n + j] + p - s) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Ranks of A^0, A^1, ... up to and including the first zero power.
    pub fn power_ranks(&self) -> Result<Vec<usize>> {
        let mut ranks = vec![self.n];
        let mut pow = self.clone();
        for _ in 0..self.n {
            let r = pow.rank();
            ranks.push(r);
            if r == 0 {
                return Ok(ranks);
            }
            if ranks[ranks.len() - 2] == r {
                break;
            }
            pow = pow.mul(self);
        }
        if *ranks.last().unwrap() == 0 {
            return Ok(ranks);
        }
        domain("matrix is not nilpotent")
    }
}

impl std::fmt::Debug for MatrixGFp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatrixGFp {}x{} mod {}", self.n, self.n, self.p)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

pub fn jordan_matrix(p_shape: &Partition, p: u64) -> Result<MatrixGFp> {
    let n = p_shape.total();
    check_prime(p, n)?;
    let mut m = MatrixGFp::zero(n, p);
    let mut off = 0;
    for &part in p_shape.parts() {
        for c in 0..part.saturating_sub(1) {
            m.set(off + c, off + c + 1, 1);
        }
        off += part;
    }
    Ok(m)
}

/// Jordan type read off the rank sequence of powers.
pub fn jordan_type(a: &MatrixGFp) -> Result<Partition> {
    let ranks = a.power_ranks()?;
    let mut parts = Vec::new();
    for i in 1..ranks.len() {
        let at_least_i = ranks[i - 1] - ranks[i];
        let at_least_next = if i + 1 < ranks.len() { ranks[i] - ranks[i + 1] } else { 0 };
        for _ in 0..at_least_i - at_least_next {
            parts.push(i);
        }
    }
    Ok(Partition::new(parts))
}

/// r_k = sum over parts p_i >= k of (p_i - k).
pub fn rank_sequence(p_shape: &Partition) -> Vec<usize> {
    (0..=p_shape.largest().unwrap_or(0))
        .map(|k| p_shape.parts().iter().filter(|&&x| x >= k).map(|&x| x - k).sum())
        .collect()
}
