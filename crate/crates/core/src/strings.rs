//! Decomposition of `A ∖ δ_α` into maximal α-strings.

use crate::error::Result;
use crate::exact::ExactScalar;
use crate::geometry::{cnorm, exact_ratio, VectorConfig, C64};

/// Integrality tolerance for numeric-mode string detection.
pub const TAU_INT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaString {
    pub alpha: usize,
    /// Sorted configuration indices.
    pub members: Vec<usize>,
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

fn exact_integer_multiple(v: &[ExactScalar], alpha: &[ExactScalar]) -> bool {
    if v.iter().all(ExactScalar::is_zero) {
        return true;
    }
    exact_ratio(v, alpha).is_some_and(|k| k.is_integer())
}

fn numeric_integer_multiple(v: &[C64], alpha: &[C64], scale: f64) -> bool {
    let an = cnorm(alpha);
    let cand = alpha.iter().zip(v).map(|(a, x)| a.conj() * x).sum::<C64>() / (an * an);
    let m = cand.re.round();
    if (cand - C64::new(m, 0.0)).norm() >= TAU_INT {
        return false;
    }
    let res: f64 = v.iter().zip(alpha).map(|(x, a)| (x - a * m).norm_sqr()).sum::<f64>().sqrt();
    res < TAU_INT * scale
}

/// Whether `γ₁ + γ₂` or `γ₁ − γ₂` is an integer multiple of `α`.
pub fn related(cfg: &VectorConfig, alpha: usize, g1: usize, g2: usize) -> bool {
    match (cfg.vector(alpha).as_exact(), cfg.vector(g1).as_exact(), cfg.vector(g2).as_exact()) {
        (Some(a), Some(x), Some(y)) => {
            let sum: Vec<ExactScalar> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let diff: Vec<ExactScalar> = x.iter().zip(y).map(|(p, q)| p - q).collect();
            exact_integer_multiple(&sum, a) || exact_integer_multiple(&diff, a)
        }
        _ => {
            let (a, x, y) = (cfg.numeric(alpha), cfg.numeric(g1), cfg.numeric(g2));
            let scale = 1.0 + cnorm(x) + cnorm(y);
            let sum: Vec<C64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            let diff: Vec<C64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
            numeric_integer_multiple(&sum, a, scale) || numeric_integer_multiple(&diff, a, scale)
        }
    }
}

/// Partition `A ∖ δ_α` into maximal α-strings: connected components of the
/// relation "γ₁ ± γ₂ ∈ ℤα". Strings are sorted by smallest member.
pub fn alpha_strings(cfg: &VectorConfig, alpha: usize) -> Result<Vec<AlphaString>> {
    cfg.check_index(alpha)?;
    let rest: Vec<usize> = (0..cfg.len()).filter(|&i| !cfg.collinear(i, alpha)).collect();
    let mut uf = UnionFind::new(rest.len());
    for a in 0..rest.len() {
        for b in a + 1..rest.len() {
            if related(cfg, alpha, rest[a], rest[b]) {
                uf.union(a, b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (pos, &idx) in rest.iter().enumerate() {
        let root = uf.find(pos);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, m)) => m.push(idx),
            None => groups.push((root, vec![idx])),
        }
    }
    // members were pushed in increasing index order, and groups appear in
    // order of their smallest member
    Ok(groups.into_iter().map(|(_, members)| AlphaString { alpha, members }).collect())
}

/// Pairs inside a string that fail the pairwise relation; empty for
/// well-behaved configurations.
pub fn non_pairwise_members(cfg: &VectorConfig, s: &AlphaString) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for (i, &a) in s.members.iter().enumerate() {
        for &b in &s.members[i + 1..] {
            if !related(cfg, s.alpha, a, b) {
                bad.push((a, b));
            }
        }
    }
    bad
}
