//! Independent oracles shared by the integration tests. Nothing here calls
//! the algorithms it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;

use eqk_core::{IntMatrix, Partition, Presentation, ZpModule};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A finite abelian p-group ⊕ ℤ/p^{e_i}, elements stored as mixed-radix
/// indices, with its addition table.
pub struct FiniteGroup {
    pub p: u64,
    moduli: Vec<u64>,
    sum: Vec<Vec<u32>>,
}

impl FiniteGroup {
    pub fn new(p: u64, exponents: &[u32]) -> Self {
        FiniteGroup {
            p,
            moduli: exponents.iter().map(|&e| p.pow(e)).collect(),
            sum: Vec::new(),
        }
    }

    /// Precomputes addition; needed before enumerating subgroups.
    pub fn with_addition_table(p: u64, exponents: &[u32]) -> Self {
        let mut g = Self::new(p, exponents);
        let n = g.order();
        g.sum = (0..n)
            .map(|a| (0..n).map(|b| g.add_slow(a, b) as u32).collect())
            .collect();
        g
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    fn decode(&self, mut x: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let c = x % m;
                x /= m;
                c
            })
            .collect()
    }

    fn encode(&self, v: &[u64]) -> u64 {
        let mut x = 0;
        for (c, m) in v.iter().zip(&self.moduli).rev() {
            x = x * m + c % m;
        }
        x
    }

    fn add_slow(&self, a: u64, b: u64) -> u64 {
        let v: Vec<u64> = self
            .decode(a)
            .iter()
            .zip(self.decode(b))
            .map(|(x, y)| x + y)
            .collect();
        self.encode(&v)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self.sum.get(a as usize) {
            Some(row) => row[b as usize] as u64,
            None => self.add_slow(a, b),
        }
    }

    pub fn scale(&self, a: u64, k: u64) -> u64 {
        let a = self.decode(a);
        let v: Vec<u64> = a
            .iter()
            .zip(&self.moduli)
            .map(|(x, m)| x * (k % m) % m)
            .collect();
        self.encode(&v)
    }

    /// The subgroup generated by `h` and `g`: the union of the cosets h + kg.
    fn extend(&self, h: &BTreeSet<u64>, g: u64) -> BTreeSet<u64> {
        let mut out = h.clone();
        let mut shift = g;
        while !h.contains(&shift) {
            out.extend(h.iter().map(|&x| self.add(x, shift)));
            shift = self.add(shift, g);
        }
        out
    }

    /// Every subgroup, by closure under adding one generator at a time.
    pub fn subgroups(&self) -> Vec<BTreeSet<u64>> {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut queue: Vec<BTreeSet<u64>> = vec![[0].into()];
        let mut all = Vec::new();
        while let Some(h) = queue.pop() {
            if !seen.insert(h.iter().copied().collect()) {
                continue;
            }
            for g in 0..self.order() {
                if !h.contains(&g) {
                    let bigger = self.extend(&h, g);
                    if !seen.contains(&bigger.iter().copied().collect::<Vec<_>>()) {
                        queue.push(bigger);
                    }
                }
            }
            all.push(h);
        }
        all
    }

    /// Type of a subgroup, read off from how many of its elements are killed
    /// by each power of p.
    pub fn subgroup_type(&self, h: &BTreeSet<u64>) -> Partition {
        let killed = |k: u32| {
            h.iter()
                .filter(|&&x| self.scale(x, self.p.pow(k)) == 0)
                .count() as u64
        };
        type_from_counts(self.p, killed)
    }

    /// Type of the quotient by `h`.
    pub fn quotient_type(&self, h: &BTreeSet<u64>) -> Partition {
        let size = h.len() as u64;
        let killed = |k: u32| {
            (0..self.order())
                .filter(|&x| h.contains(&self.scale(x, self.p.pow(k))))
                .count() as u64
                / size
        };
        type_from_counts(self.p, killed)
    }
}

/// Recovers λ from the sizes |A[p^k]|: the number of parts ≥ k is
/// log_p(|A[p^k]| / |A[p^{k-1}]|).
fn type_from_counts(p: u64, killed: impl Fn(u32) -> u64) -> Partition {
    let log = |mut n: u64| {
        let mut e = 0u32;
        while n > 1 {
            assert_eq!(n % p, 0);
            n /= p;
            e += 1;
        }
        e
    };
    let mut at_least = Vec::new();
    let mut prev = 1;
    for k in 1.. {
        let now = killed(k);
        if now == prev {
            break;
        }
        at_least.push(log(now / prev));
        prev = now;
    }
    let mut parts = Vec::new();
    let len = at_least.first().copied().unwrap_or(0);
    for i in 0..len {
        parts.push(at_least.iter().filter(|&&c| c > i).count() as u32);
    }
    Partition::new(parts).expect("parts are weakly decreasing")
}

/// All (sub, quot) type pairs realized by subgroups of the group of type λ.
pub fn realized_extensions(p: u64, lambda: &Partition) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let g = FiniteGroup::with_addition_table(p, lambda.parts());
    g.subgroups()
        .iter()
        .map(|h| {
            (
                g.subgroup_type(h).parts().to_vec(),
                g.quotient_type(h).parts().to_vec(),
            )
        })
        .collect()
}

fn inverse_mod(a: i128, m: i128) -> i128 {
    let (mut r0, mut r1, mut s0, mut s1) = (a.rem_euclid(m), m, 1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not a unit");
    s0.rem_euclid(m)
}

/// Exponent of p above which entries are treated as zero.
const PRECISION: u32 = 16;

fn vp(x: i128, p: i128) -> u32 {
    if x == 0 {
        return PRECISION;
    }
    let mut e = 0;
    let mut x = x;
    while x % p == 0 && e < PRECISION {
        x /= p;
        e += 1;
    }
    e
}

/// The cokernel of an integer matrix (columns are relations) over ℤ₍p₎, by
/// pivoting on entries of least p-valuation modulo p^PRECISION.
pub fn local_cokernel(p: u64, rows: usize, cols: &[Vec<i64>]) -> ZpModule {
    let pp = p as i128;
    let m = pp.pow(PRECISION);
    let mut a: Vec<Vec<i128>> = (0..rows)
        .map(|i| cols.iter().map(|c| (c[i] as i128).rem_euclid(m)).collect())
        .collect();
    let ncols = cols.len();
    let mut exps = Vec::new();
    let (mut r, mut c) = (0, 0);
    while r < rows && c < ncols {
        let mut best: Option<(usize, usize, u32)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, &x) in row.iter().enumerate().skip(c) {
                let v = vp(x, pp);
                if v < PRECISION && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(r, bi);
        for row in a.iter_mut() {
            row.swap(c, bj);
        }
        let unit = a[r][c] / pp.pow(v);
        let inv = inverse_mod(unit, m);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = (row[c] / pp.pow(v)) * inv % m;
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = (*x - f * y).rem_euclid(m);
                }
            }
        }
        for j in c + 1..ncols {
            if a[r][j] != 0 {
                let f = (a[r][j] / pp.pow(v)) * inv % m;
                for row in a.iter_mut() {
                    row[j] = (row[j] - f * row[c]).rem_euclid(m);
                }
            }
        }
        exps.push(v);
        r += 1;
        c += 1;
    }
    let rank = rows - exps.len();
    let torsion: Vec<u32> = exps.into_iter().filter(|&v| v > 0).collect();
    ZpModule::new(p, rank, Partition::from_unsorted(torsion)).expect("valid module")
}

/// A ℤ₍p₎-module written as a (possibly scrambled) integer presentation.
#[derive(Clone, Debug)]
pub struct IntPresentation {
    pub gens: usize,
    /// Relations as columns; linearly independent.
    pub rels: Vec<Vec<i64>>,
}

impl IntPresentation {
    /// ℤ^rank ⊕ ⊕ ℤ/p^e with the diagonal relations.
    pub fn diagonal(p: u64, rank: usize, exps: &[u32]) -> Self {
        let gens = rank + exps.len();
        let rels = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let mut col = vec![0; gens];
                col[rank + i] = (p as i64).pow(e);
                col
            })
            .collect();
        IntPresentation { gens, rels }
    }

    /// Replaces the relation matrix A by U A V for random unimodular U, V.
    pub fn scramble(&mut self, rng: &mut ChaCha8Rng) {
        let n = self.gens;
        let k = self.rels.len();
        for _ in 0..3 {
            if n >= 2 {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let c: i64 = rng.gen_range(-2..=2);
                if i != j {
                    for col in self.rels.iter_mut() {
                        col[i] += c * col[j];
                    }
                }
            }
            if k >= 2 {
                let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
                let c: i64 = rng.gen_range(-2..=2);
                if i != j {
                    let src = self.rels[j].clone();
                    for (x, y) in self.rels[i].iter_mut().zip(src) {
                        *x += c * y;
                    }
                }
            }
        }
    }

    /// Relations of `self ⊗ other`: A ⊗ I and I ⊗ B side by side.
    pub fn tensor(&self, other: &IntPresentation) -> IntPresentation {
        let (n, m) = (self.gens, other.gens);
        let mut rels = Vec::new();
        for a in &self.rels {
            for j in 0..m {
                let mut col = vec![0; n * m];
                for i in 0..n {
                    col[i * m + j] = a[i];
                }
                rels.push(col);
            }
        }
        for i in 0..n {
            for b in &other.rels {
                let mut col = vec![0; n * m];
                for j in 0..m {
                    col[i * m + j] = b[j];
                }
                rels.push(col);
            }
        }
        IntPresentation { gens: n * m, rels }
    }

    pub fn local_module(&self, p: u64) -> ZpModule {
        local_cokernel(p, self.gens, &self.rels)
    }
}

/// Tor₁(coker A, ℤ/p^b) = ker(A on (ℤ/p^b)^{#rels}), counted element by
/// element; the type comes from the counts of elements killed by p^k.
pub fn tor_against_cyclic(p: u64, a: &IntPresentation, b: u32) -> Partition {
    let k = a.rels.len();
    let modulus = p.pow(b) as i64;
    let group = FiniteGroup::new(p, &vec![b; k]);
    let kernel: BTreeSet<u64> = (0..group.order())
        .filter(|&x| {
            let v = group.decode(x);
            (0..a.gens).all(|i| {
                let s: i64 = (0..k).map(|j| a.rels[j][i] * v[j] as i64).sum();
                s.rem_euclid(modulus) == 0
            })
        })
        .collect();
    group.subgroup_type(&kernel)
}

/// Tor₁ of two presented modules; B enters through its cyclic summands.
pub fn tor_oracle(p: u64, a: &IntPresentation, b_exps: &[u32]) -> ZpModule {
    let mut parts = Vec::new();
    for &e in b_exps {
        parts.extend_from_slice(tor_against_cyclic(p, a, e).parts());
    }
    ZpModule::new(p, 0, Partition::from_unsorted(parts)).expect("valid module")
}

/// Whether multiplication by q is bijective on coker R: the n×n minors of
/// [qI | R] must have gcd 1.
pub fn multiplication_invertible(q: i64, n: usize, rels: &[Vec<i64>]) -> bool {
    let mut cols: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { q } else { 0 }).collect())
        .collect();
    cols.extend(rels.iter().cloned());
    let mut g: i128 = 0;
    for pick in combinations(cols.len(), n) {
        let m: Vec<Vec<i128>> = (0..n)
            .map(|i| pick.iter().map(|&j| cols[j][i] as i128).collect())
            .collect();
        g = gcd(g, det(&m));
        if g == 1 {
            return true;
        }
    }
    g == 1
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// A random relation matrix with `n` rows, as columns.
pub fn random_relations(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect())
        .collect()
}

pub fn presentation(n: usize, rels: &[Vec<i64>]) -> Presentation {
    let mut m = IntMatrix::zeros(n, rels.len());
    for (j, col) in rels.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            m.set(i, j, x.into());
        }
    }
    Presentation::new(n, m).expect("shapes agree")
}

/// Torsion partitions with at most two parts, each at most 3.
pub fn small_torsion_types() -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for a in 1..=3 {
        out.push(vec![a]);
        for b in 1..=a {
            out.push(vec![a, b]);
        }
    }
    out
}
