//! Partitions as types of finite p-modules, and the Littlewood–Richardson
//! positivity test that decides which extensions exist.

use std::fmt;

use super::LinalgError;

/// A weakly decreasing list of positive parts. As the type of a finite
/// p-module, `(k₁, k₂, …)` stands for `⊕ ℤ/p^{kᵢ}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, LinalgError> {
        if parts.contains(&0) {
            return Err(LinalgError::InvalidPartition(format!(
                "{parts:?} has a zero part"
            )));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(LinalgError::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&k| k > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total size `Σ kᵢ`, the p-length of the module.
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Whether the Young diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| other.0[i] <= self.0[i])
    }

    /// Multiset union of parts (type of the direct sum).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::from_unsorted(parts)
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        Partition(
            (1..=width)
                .map(|c| self.0.iter().filter(|&&k| k >= c).count() as u32)
                .collect(),
        )
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        fn go(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            for k in (1..=max.min(remaining)).rev() {
                prefix.push(k);
                go(remaining - k, k, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Whether a finite p-module of type `mid` is an extension of one of type
/// `quot` by one of type `sub`, i.e. `0 → sub → mid → quot → 0` exists.
///
/// This is positivity of the Littlewood–Richardson coefficient
/// `c^{mid}_{sub,quot}`, decided by searching for one LR tableau of skew shape
/// `mid/sub` and content `quot`. The answer does not depend on `p`.
pub fn lr_extension_feasible(mid: &Partition, sub: &Partition, quot: &Partition) -> bool {
    if mid.size() != sub.size() + quot.size() || !mid.contains(sub) {
        return false;
    }
    let mut search = LrSearch::new(mid, sub, quot);
    search.fill(0)
}

/// Counts LR tableaux of shape `mid/sub` with content `quot`.
pub fn lr_coefficient(mid: &Partition, sub: &Partition, quot: &Partition) -> u64 {
    if mid.size() != sub.size() + quot.size() || !mid.contains(sub) {
        return 0;
    }
    let mut search = LrSearch::new(mid, sub, quot);
    search.count = Some(0);
    search.fill(0);
    search.count.unwrap_or(0)
}

struct LrSearch<'a> {
    mid: &'a Partition,
    sub: &'a Partition,
    /// cells in reading order: rows top to bottom, each right to left
    cells: Vec<(usize, usize)>,
    grid: Vec<Vec<u32>>,
    remaining: Vec<u32>,
    /// occurrences of each letter so far in the reading word
    seen: Vec<u32>,
    count: Option<u64>,
}

impl<'a> LrSearch<'a> {
    fn new(mid: &'a Partition, sub: &'a Partition, quot: &'a Partition) -> Self {
        let mut cells = Vec::new();
        for r in 0..mid.len() {
            for c in (sub.part(r) as usize..mid.part(r) as usize).rev() {
                cells.push((r, c));
            }
        }
        LrSearch {
            mid,
            sub,
            cells,
            grid: (0..mid.len())
                .map(|r| vec![0; mid.part(r) as usize])
                .collect(),
            remaining: quot.parts().to_vec(),
            seen: vec![0; quot.len()],
            count: None,
        }
    }

    fn in_skew(&self, r: usize, c: usize) -> bool {
        c >= self.sub.part(r) as usize && c < self.mid.part(r) as usize
    }

    /// Returns true once a tableau is found (in counting mode keeps going).
    fn fill(&mut self, idx: usize) -> bool {
        if idx == self.cells.len() {
            match &mut self.count {
                Some(n) => {
                    *n += 1;
                    return false;
                }
                None => return true,
            }
        }
        let (r, c) = self.cells[idx];
        // weakly increasing along the row: bounded by the cell to the right
        let upper = if self.in_skew(r, c + 1) {
            self.grid[r][c + 1]
        } else {
            self.remaining.len() as u32
        };
        // strictly increasing down the column
        let lower = if r > 0 && self.in_skew(r - 1, c) {
            self.grid[r - 1][c] + 1
        } else {
            1
        };
        for letter in lower..=upper {
            let k = (letter - 1) as usize;
            if self.remaining[k] == 0 {
                continue;
            }
            // lattice condition on the reading word
            if k > 0 && self.seen[k] + 1 > self.seen[k - 1] {
                continue;
            }
            self.grid[r][c] = letter;
            self.remaining[k] -= 1;
            self.seen[k] += 1;
            let done = self.fill(idx + 1);
            self.seen[k] -= 1;
            self.remaining[k] += 1;
            self.grid[r][c] = 0;
            if done {
                return true;
            }
        }
        false
    }
}
