use super::LatticeError;

/// A finite lattice given by an explicit order relation on named elements.
///
/// Joins are tabulated at construction; construction fails unless the
/// relation is a partial order in which every pair has a least upper bound
/// and a least element exists (which makes a finite poset a complete lattice).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    /// Builds a lattice from the reflexive-transitive closure of `covers`
    /// (pairs `(a, b)` meaning `a ≤ b`).
    pub fn from_covers(names: &[&str], covers: &[(usize, usize)]) -> Result<Self, LatticeError> {
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(LatticeError::Construction(format!(
                    "cover ({a}, {b}) refers to a missing element"
                )));
            }
            leq[a][b] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_relation(names.iter().map(|s| s.to_string()).collect(), leq)
    }

    /// Builds a lattice from a full order matrix.
    pub fn from_relation(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Construction("a lattice needs at least one element".into()));
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Construction("order matrix has the wrong shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(LatticeError::Construction(format!("{} ≤ {} fails", names[i], names[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::Construction(format!(
                        "{} and {} are mutually below each other",
                        names[i], names[j]
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(LatticeError::Construction(format!(
                            "order is not transitive at {}, {}, {}",
                            names[i], names[j], names[k]
                        )));
                    }
                }
            }
        }
        let least_of = |candidates: &[usize]| -> Option<usize> {
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| leq[c][d]))
        };
        let all: Vec<usize> = (0..n).collect();
        let bottom = least_of(&all)
            .ok_or_else(|| LatticeError::Construction("no least element".into()))?;
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let upper: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                join[a][b] = least_of(&upper).ok_or_else(|| {
                    LatticeError::Construction(format!("{} and {} have no join", names[a], names[b]))
                })?;
            }
        }
        let top = (1..n).fold(bottom, |acc, c| join[acc][c]);
        Ok(FiniteLattice {
            names,
            leq,
            join,
            bottom,
            top,
        })
    }

    /// The chain `names[0] < names[1] < …`.
    pub fn chain(names: &[&str]) -> Result<Self, LatticeError> {
        let covers: Vec<(usize, usize)> = (1..names.len()).map(|i| (i - 1, i)).collect();
        Self::from_covers(names, &covers)
    }

    /// The powerset of `{0, …, bits-1}` ordered by inclusion; element `i` is the bitmask `i`.
    pub fn powerset(bits: u32) -> Result<Self, LatticeError> {
        if bits > 6 {
            return Err(LatticeError::Construction(format!(
                "powerset of {bits} bits is too large"
            )));
        }
        let n = 1usize << bits;
        let names = (0..n)
            .map(|m| {
                let members: Vec<String> =
                    (0..bits).filter(|b| m & (1 << b) != 0).map(|b| b.to_string()).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let leq = (0..n)
            .map(|a| (0..n).map(|b| a & b == a).collect())
            .collect();
        Self::from_relation(names, leq)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Join of any collection; the empty join is the bottom.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join[acc][x])
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// `true` if `a ≤_other b` implies `a ≤_self b` for all `a, b`; on failure
    /// returns the first offending pair.
    pub fn extends(&self, other: &FiniteLattice) -> Result<(), (usize, usize)> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                if other.le(a, b) && !self.le(a, b) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}
