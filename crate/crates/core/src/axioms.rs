//! Exhaustive (or seeded, sampled) verification of the model axioms on
//! finite carriers.
//!
//! Relations are tabulated once in a [`CarrierIndex`]. Axioms 1, 2 and 5
//! only quantify over elements and are always checked on every pair. Axioms
//! 3 and 4 quantify over sets: all subsets of every cone (resp. stage class)
//! when the carrier is within the exhaustive limit, random subsets otherwise.
//! Axioms 6 and 7 quantify over families indexed by `J`; the checker covers
//! `|J| = 2` completely (and `|J| = 3` for small relations), which implies
//! every finite `J` by induction on `|J|` since `⋁` is associative. Chains
//! in Axiom 7 are finite `⊑_α`-increasing prefixes followed by a constant tail.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exec::Exec;
use crate::lattice::{LatticeError, StageIndex, StratifiedLattice};

/// Largest carrier for which relation tables are built at all.
pub const TABLE_LIMIT: usize = 4096;

/// Largest accepted exhaustive limit: subsets are enumerated as `u64` masks
/// and `2^28` is already minutes of work.
pub const MAX_EXHAUSTIVE_LIMIT: usize = 28;

/// Checker settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Carriers up to this size are checked over all subsets.
    pub exhaustive_limit: usize,
    /// Number of random instances per set-quantified axiom above the limit;
    /// `None` refuses to check such carriers.
    pub samples: Option<usize>,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            exhaustive_limit: 8,
            samples: None,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

/// How an axiom's quantifiers were discharged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Exhaustive => write!(f, "exhaustive"),
            Regime::Sampled { samples, seed } => write!(f, "sampled ({samples} instances, seed {seed})"),
        }
    }
}

/// Result of one axiom check. `witness` is `None` on success.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// Axiom number, or 0 for the structural checks.
    pub axiom: u8,
    pub regime: Regime,
    pub witness: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.axiom == 0 {
            "structure".to_string()
        } else {
            format!("axiom {}", self.axiom)
        };
        match &self.witness {
            None => write!(f, "{name}: pass [{}]", self.regime),
            Some(w) => write!(f, "{name}: FAIL [{}]: {w}", self.regime),
        }
    }
}

/// Dense square bit matrix.
#[derive(Clone, Debug)]
struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64);
        let mut data = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    data[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BitRows { words, data }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }
}

/// The carrier of a model with `≤` and every `⊑_α` tabulated.
pub struct CarrierIndex<'m, M: StratifiedLattice> {
    model: &'m M,
    elems: Vec<M::Elem>,
    index: HashMap<M::Elem, usize>,
    le: BitRows,
    sq: Vec<BitRows>,
}

impl<'m, M: StratifiedLattice> CarrierIndex<'m, M> {
    /// Fails with [`LatticeError::SizeLimit`] above `limit` elements.
    pub fn new(model: &'m M, limit: usize, exec: Exec) -> Result<Self, LatticeError> {
        let size = model.carrier_size();
        if size > limit as u128 {
            return Err(LatticeError::SizeLimit {
                what: "carrier".into(),
                size,
                limit: limit as u128,
            });
        }
        let elems = model.elements();
        let n = elems.len();
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let le = BitRows::new(n, |i, j| model.le(&elems[i], &elems[j]));
        let sq = exec.map(model.kappa(), |a| {
            let stage = StageIndex::new_unchecked(a);
            BitRows::new(n, |i, j| model.sqle_alpha(stage, &elems[i], &elems[j]))
        });
        Ok(CarrierIndex {
            model,
            elems,
            index,
            le,
            sq,
        })
    }

    pub fn model(&self) -> &'m M {
        self.model
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[M::Elem] {
        &self.elems
    }

    pub fn elem(&self, i: usize) -> &M::Elem {
        &self.elems[i]
    }

    /// Position of `x` in the carrier; `None` if the model produced a foreign value.
    pub fn idx(&self, x: &M::Elem) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn kappa(&self) -> usize {
        self.sq.len()
    }

    pub fn stage(&self, a: usize) -> StageIndex {
        assert!(a < self.kappa());
        StageIndex::new_unchecked(a)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le.get(i, j)
    }

    pub fn sq(&self, a: usize, i: usize, j: usize) -> bool {
        self.sq[a].get(i, j)
    }

    pub fn eq(&self, a: usize, i: usize, j: usize) -> bool {
        self.sq(a, i, j) && self.sq(a, j, i)
    }

    pub fn lt(&self, a: usize, i: usize, j: usize) -> bool {
        self.sq(a, i, j) && !self.sq(a, j, i)
    }

    /// `i ⊑ j` from the tables.
    pub fn sqle(&self, i: usize, j: usize) -> bool {
        i == j || (0..self.kappa()).any(|a| self.lt(a, i, j))
    }

    /// `j ∈ (i]_α`.
    pub fn in_cone(&self, a: usize, i: usize, j: usize) -> bool {
        (0..a).all(|b| self.eq(b, i, j))
    }

    /// Members of `(i]_α` in carrier order.
    pub fn cone(&self, a: usize, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.in_cone(a, i, j)).collect()
    }

    /// Members of `[i]_α` in carrier order.
    pub fn class(&self, a: usize, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.eq(a, i, j)).collect()
    }

    /// The distinct cones at stage `a` (they partition the carrier).
    pub fn cones(&self, a: usize) -> Vec<Vec<usize>> {
        self.partition(|i, j| self.in_cone(a, i, j))
    }

    /// The distinct `=_α` classes.
    pub fn classes(&self, a: usize) -> Vec<Vec<usize>> {
        self.partition(|i, j| self.eq(a, i, j))
    }

    fn partition(&self, same: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
        let mut owner = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.len() {
            if owner[i] != usize::MAX {
                continue;
            }
            let members: Vec<usize> = (i..self.len()).filter(|&j| same(i, j)).collect();
            for &j in &members {
                owner[j] = out.len();
            }
            out.push(members);
        }
        out
    }

    /// Carrier index of `⋁` of the given elements.
    pub fn lub_idx(&self, xs: &[usize]) -> Result<usize, String> {
        let refs: Vec<&M::Elem> = xs.iter().map(|&i| &self.elems[i]).collect();
        let y = self.model.lub(&refs);
        self.idx(&y)
            .ok_or_else(|| format!("lub returned {}, which is not in the carrier", self.model.render(&y)))
    }

    /// Carrier index of `⊔_α` of the given elements inside `(anchor]_α`.
    pub fn alpha_lub_idx(&self, a: usize, anchor: usize, xs: &[usize]) -> Result<usize, String> {
        let refs: Vec<&M::Elem> = xs.iter().map(|&i| &self.elems[i]).collect();
        let y = self
            .model
            .alpha_lub(self.stage(a), &self.elems[anchor], &refs)
            .map_err(|e| e.to_string())?;
        self.idx(&y).ok_or_else(|| {
            format!(
                "stage {a} supremum returned {}, which is not in the carrier",
                self.model.render(&y)
            )
        })
    }

    pub fn render(&self, i: usize) -> String {
        self.model.render(&self.elems[i])
    }

    pub fn render_set(&self, xs: &[usize]) -> String {
        let parts: Vec<String> = xs.iter().map(|&i| self.render(i)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn check_config(cfg: &CheckConfig) -> Result<(), LatticeError> {
    if cfg.exhaustive_limit > MAX_EXHAUSTIVE_LIMIT {
        return Err(LatticeError::SizeLimit {
            what: "exhaustive limit".into(),
            size: cfg.exhaustive_limit as u128,
            limit: MAX_EXHAUSTIVE_LIMIT as u128,
        });
    }
    Ok(())
}

/// Decides the regime for set-quantified axioms.
fn regime_for(size: u128, cfg: &CheckConfig, axiom: u8) -> Result<Regime, LatticeError> {
    if size <= cfg.exhaustive_limit as u128 {
        return Ok(Regime::Exhaustive);
    }
    match cfg.samples {
        Some(samples) => Ok(Regime::Sampled {
            samples,
            seed: cfg.seed,
        }),
        None => Err(LatticeError::SizeLimit {
            what: format!("carrier for exhaustive checking of axiom {axiom} (enable sampling to go further)"),
            size,
            limit: cfg.exhaustive_limit as u128,
        }),
    }
}

fn rng_for(seed: u64, axiom: u8) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ ((axiom as u64) << 56))
}

/// Checks a single axiom (1 to 7).
pub fn check_axiom<M: StratifiedLattice>(
    model: &M,
    axiom: u8,
    cfg: &CheckConfig,
) -> Result<AxiomReport, LatticeError> {
    check_config(cfg)?;
    let idx = CarrierIndex::new(model, TABLE_LIMIT, cfg.exec)?;
    check_axiom_indexed(&idx, axiom, cfg)
}

/// Checks Axioms 1 to 7 in order, sharing one relation table.
pub fn check_all<M: StratifiedLattice>(model: &M, cfg: &CheckConfig) -> Result<Vec<AxiomReport>, LatticeError> {
    check_config(cfg)?;
    let idx = CarrierIndex::new(model, TABLE_LIMIT, cfg.exec)?;
    (1..=7).map(|n| check_axiom_indexed(&idx, n, cfg)).collect()
}

/// [`check_axiom`] against a prebuilt index.
pub fn check_axiom_indexed<M: StratifiedLattice>(
    idx: &CarrierIndex<'_, M>,
    axiom: u8,
    cfg: &CheckConfig,
) -> Result<AxiomReport, LatticeError> {
    check_config(cfg)?;
    let size = idx.len() as u128;
    let (regime, witness) = match axiom {
        1 => (Regime::Exhaustive, axiom1(idx, cfg.exec)),
        2 => (Regime::Exhaustive, axiom2(idx, cfg.exec)),
        3 => {
            let regime = regime_for(size, cfg, 3)?;
            (regime, axiom3(idx, regime, cfg.exec))
        }
        4 => {
            let regime = regime_for(size, cfg, 4)?;
            (regime, axiom4(idx, regime, cfg.exec))
        }
        5 => (Regime::Exhaustive, axiom5(idx, cfg.exec)),
        6 => {
            let regime = regime_for(size, cfg, 6)?;
            (regime, axiom6(idx, regime, cfg.exec))
        }
        7 => {
            let regime = regime_for(size, cfg, 7)?;
            let w = match axiom6(idx, regime, cfg.exec) {
                Some(w) => Some(format!("axiom 6 fails, which axiom 7 presupposes: {w}")),
                None => axiom7(idx, regime, cfg.exec),
            };
            (regime, w)
        }
        n => {
            return Err(LatticeError::Construction(format!(
                "there is no axiom {n}; expected 1 to 7"
            )))
        }
    };
    Ok(AxiomReport {
        axiom,
        regime,
        witness,
    })
}

/// Lattice and preorder sanity: `≤` is a partial order, `lub` returns least
/// upper bounds (empty, binary and ternary sets), each `⊑_α` is a preorder.
pub fn check_structure<M: StratifiedLattice>(model: &M, cfg: &CheckConfig) -> Result<AxiomReport, LatticeError> {
    check_config(cfg)?;
    let idx = CarrierIndex::new(model, TABLE_LIMIT, cfg.exec)?;
    Ok(AxiomReport {
        axiom: 0,
        regime: Regime::Exhaustive,
        witness: structure(&idx, cfg.exec),
    })
}

fn structure<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, exec: Exec) -> Option<String> {
    let n = idx.len();
    if idx.kappa() == 0 {
        return Some("kappa is 0".into());
    }
    let bot = match idx.lub_idx(&[]) {
        Ok(b) => b,
        Err(e) => return Some(e),
    };
    if let Some(x) = (0..n).find(|&x| !idx.le(bot, x)) {
        return Some(format!("lub of the empty set {} is not below {}", idx.render(bot), idx.render(x)));
    }
    let order = exec.find_first(n, |x| {
        if !idx.le(x, x) {
            return Some(format!("≤ is not reflexive at {}", idx.render(x)));
        }
        for a in 0..idx.kappa() {
            if !idx.sq(a, x, x) {
                return Some(format!("⊑_{a} is not reflexive at {}", idx.render(x)));
            }
        }
        for y in 0..n {
            if x != y && idx.le(x, y) && idx.le(y, x) {
                return Some(format!("≤ is not antisymmetric on {} and {}", idx.render(x), idx.render(y)));
            }
            let j = match idx.lub_idx(&[x, y]) {
                Ok(j) => j,
                Err(e) => return Some(e),
            };
            if !idx.le(x, j) || !idx.le(y, j) {
                return Some(format!("lub {} does not bound {} and {}", idx.render(j), idx.render(x), idx.render(y)));
            }
            if let Some(z) = (0..n).find(|&z| idx.le(x, z) && idx.le(y, z) && !idx.le(j, z)) {
                return Some(format!(
                    "lub of {} and {} is {}, not below the upper bound {}",
                    idx.render(x),
                    idx.render(y),
                    idx.render(j),
                    idx.render(z)
                ));
            }
            for z in 0..n {
                if idx.le(x, y) && idx.le(y, z) && !idx.le(x, z) {
                    return Some(format!("≤ is not transitive at {}, {}, {}", idx.render(x), idx.render(y), idx.render(z)));
                }
                for a in 0..idx.kappa() {
                    if idx.sq(a, x, y) && idx.sq(a, y, z) && !idx.sq(a, x, z) {
                        return Some(format!(
                            "⊑_{a} is not transitive at {}, {}, {}",
                            idx.render(x),
                            idx.render(y),
                            idx.render(z)
                        ));
                    }
                }
            }
        }
        None
    });
    if order.is_some() {
        return order;
    }
    // ternary suprema agree with iterated binary ones
    if n <= 64 {
        return exec.find_first(n * n, |p| {
            let (x, y) = (p / n, p % n);
            let xy = idx.lub_idx(&[x, y]).ok()?;
            (0..n).find_map(|z| {
                let direct = idx.lub_idx(&[x, y, z]).ok()?;
                let folded = idx.lub_idx(&[xy, z]).ok()?;
                (direct != folded).then(|| {
                    format!(
                        "lub of {} is {} but folding binary lubs gives {}",
                        idx.render_set(&[x, y, z]),
                        idx.render(direct),
                        idx.render(folded)
                    )
                })
            })
        });
    }
    None
}

fn axiom1<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, exec: Exec) -> Option<String> {
    let n = idx.len();
    let k = idx.kappa();
    exec.find_first(n * n, |p| {
        let (x, y) = (p / n, p % n);
        for b in 0..k {
            if !idx.sq(b, x, y) {
                continue;
            }
            if let Some(a) = (0..b).find(|&a| !idx.eq(a, x, y)) {
                return Some(format!(
                    "{} ⊑_{b} {} but not {} =_{a} {}",
                    idx.render(x),
                    idx.render(y),
                    idx.render(x),
                    idx.render(y)
                ));
            }
        }
        None
    })
}

fn axiom2<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, exec: Exec) -> Option<String> {
    let n = idx.len();
    exec.find_first(n * n, |p| {
        let (x, y) = (p / n, p % n);
        (x != y && (0..idx.kappa()).all(|a| idx.eq(a, x, y))).then(|| {
            format!(
                "{} and {} are distinct but equivalent at every stage",
                idx.render(x),
                idx.render(y)
            )
        })
    })
}

/// Whether `y = ⊔_α X` meets Axiom 3 inside `cone` (carrier indices), by scan.
fn axiom3_instance<M: StratifiedLattice>(
    idx: &CarrierIndex<'_, M>,
    a: usize,
    anchor: usize,
    cone: &[usize],
    xs: &[usize],
) -> Option<String> {
    let y = match idx.alpha_lub_idx(a, anchor, xs) {
        Ok(y) => y,
        Err(e) => return Some(e),
    };
    let describe = |what: String| {
        format!(
            "stage {a}, anchor {}, X = {}: supremum {} {what}",
            idx.render(anchor),
            idx.render_set(xs),
            idx.render(y)
        )
    };
    if !idx.in_cone(a, anchor, y) {
        return Some(describe("lies outside the cone".into()));
    }
    if let Some(&x) = xs.iter().find(|&&x| !idx.sq(a, x, y)) {
        return Some(describe(format!("is not a ⊑_{a}-upper bound of {}", idx.render(x))));
    }
    cone.iter()
        .find(|&&z| xs.iter().all(|&x| idx.sq(a, x, z)) && !(idx.sq(a, y, z) && idx.le(y, z)))
        .map(|&z| describe(format!("is not below the upper bound {} in both ⊑_{a} and ≤", idx.render(z))))
}

fn axiom3<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, regime: Regime, exec: Exec) -> Option<String> {
    let cones: Vec<(usize, Vec<usize>)> = (0..idx.kappa())
        .flat_map(|a| idx.cones(a).into_iter().map(move |c| (a, c)))
        .collect();
    // Empty X is anchor-relative: check it against every anchor.
    let empty = exec.find_first(cones.len(), |c| {
        let (a, cone) = &cones[c];
        cone.iter().find_map(|&anchor| axiom3_instance(idx, *a, anchor, cone, &[]))
    });
    if empty.is_some() {
        return empty;
    }
    // For nonempty X the anchor must not matter.
    let anchors = exec.find_first(cones.len(), |c| {
        let (a, cone) = &cones[c];
        let reference: Vec<Result<usize, String>> =
            cone.iter().map(|&x| idx.alpha_lub_idx(*a, cone[0], &[x])).collect();
        cone.iter().find_map(|&anchor| {
            cone.iter().zip(&reference).find_map(|(&x, r)| {
                let got = idx.alpha_lub_idx(*a, anchor, &[x]);
                (got != *r).then(|| {
                    format!(
                        "stage {a}: supremum of {{{}}} depends on the anchor ({} vs {})",
                        idx.render(x),
                        idx.render(cone[0]),
                        idx.render(anchor)
                    )
                })
            })
        })
    });
    if anchors.is_some() {
        return anchors;
    }
    match regime {
        Regime::Exhaustive => axiom3_all_subsets(idx, &cones, exec),
        Regime::Sampled { samples, seed } => {
            let mut rng = rng_for(seed, 3);
            let instances: Vec<(usize, Vec<usize>)> = (0..samples)
                .map(|_| {
                    let (a, cone) = cones.choose(&mut rng).expect("at least one cone");
                    (*a, random_subset(&mut rng, cone))
                })
                .collect();
            exec.find_first(instances.len(), |s| {
                let (a, xs) = &instances[s];
                let Some(&anchor) = xs.first() else { return None };
                let cone = idx.cone(*a, anchor);
                axiom3_instance(idx, *a, anchor, &cone, xs)
            })
        }
    }
}

const CHUNK_BITS: u32 = 12;

fn axiom3_all_subsets<M: StratifiedLattice>(
    idx: &CarrierIndex<'_, M>,
    cones: &[(usize, Vec<usize>)],
    exec: Exec,
) -> Option<String> {
    struct Prepared {
        a: usize,
        cone: Vec<usize>,
        // below[k]: cone members ⊑_α cone[k]
        below: Vec<u64>,
        // good[k]: cone members z with cone[k] ⊑_α z and cone[k] ≤ z
        good: Vec<u64>,
    }
    let prepared: Vec<Prepared> = cones
        .iter()
        .map(|(a, cone)| {
            assert!(cone.len() < 64, "cone too large for mask enumeration");
            let mask = |f: &dyn Fn(usize) -> bool| -> u64 {
                cone.iter()
                    .enumerate()
                    .filter(|(_, &z)| f(z))
                    .fold(0u64, |m, (k, _)| m | (1 << k))
            };
            let below = cone.iter().map(|&z| mask(&|x| idx.sq(*a, x, z))).collect();
            let good = cone
                .iter()
                .map(|&y| mask(&|z| idx.sq(*a, y, z) && idx.le(y, z)))
                .collect();
            Prepared {
                a: *a,
                cone: cone.clone(),
                below,
                good,
            }
        })
        .collect();
    let mut tasks: Vec<(usize, u64)> = Vec::new();
    for (c, p) in prepared.iter().enumerate() {
        let total = 1u64 << p.cone.len();
        let mut start = 1;
        while start < total {
            tasks.push((c, start));
            start = ((start >> CHUNK_BITS) + 1) << CHUNK_BITS;
        }
    }
    exec.find_first(tasks.len(), |t| {
        let (c, start) = tasks[t];
        let p = &prepared[c];
        let m = p.cone.len();
        let total = 1u64 << m;
        let end = (((start >> CHUNK_BITS) + 1) << CHUNK_BITS).min(total);
        let full = (1u64 << m) - 1;
        let mut refs: Vec<&M::Elem> = Vec::with_capacity(m);
        let mut xs: Vec<usize> = Vec::with_capacity(m);
        let stage = idx.stage(p.a);
        for mask in start..end {
            refs.clear();
            xs.clear();
            let mut bits = mask;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                xs.push(p.cone[k]);
                refs.push(idx.elem(p.cone[k]));
            }
            let anchor = idx.elem(p.cone[0]);
            let y = match idx.model().alpha_lub(stage, anchor, &refs) {
                Ok(y) => y,
                Err(e) => return Some(format!("stage {}, X = {}: {e}", p.a, idx.render_set(&xs))),
            };
            let k = idx.idx(&y).and_then(|yi| p.cone.iter().position(|&z| z == yi));
            let ok = k.is_some_and(|k| {
                if mask & !p.below[k] != 0 {
                    return false;
                }
                let upper = (0..m).filter(|&z| mask & !p.below[z] == 0).fold(0u64, |u, z| u | (1 << z));
                upper & !p.good[k] & full == 0
            });
            if !ok {
                // Re-derive a readable witness with the scanning check.
                return Some(
                    axiom3_instance(idx, p.a, p.cone[0], &p.cone, &xs)
                        .unwrap_or_else(|| format!("stage {}, X = {}: inconsistent supremum", p.a, idx.render_set(&xs))),
                );
            }
        }
        None
    })
}

fn random_subset<R: Rng>(rng: &mut R, domain: &[usize]) -> Vec<usize> {
    let p: f64 = rng.gen_range(0.0..1.0);
    domain.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

fn axiom4<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, regime: Regime, exec: Exec) -> Option<String> {
    let classes: Vec<(usize, Vec<usize>)> = (0..idx.kappa())
        .flat_map(|a| idx.classes(a).into_iter().map(move |c| (a, c)))
        .collect();
    let instance = |a: usize, xs: &[usize]| -> Option<String> {
        let j = match idx.lub_idx(xs) {
            Ok(j) => j,
            Err(e) => return Some(e),
        };
        (!idx.eq(a, xs[0], j)).then(|| {
            format!(
                "every element of {} is =_{a} {} but their lub {} is not",
                idx.render_set(xs),
                idx.render(xs[0]),
                idx.render(j)
            )
        })
    };
    match regime {
        Regime::Exhaustive => {
            let mut tasks: Vec<(usize, u64)> = Vec::new();
            for (c, (_, class)) in classes.iter().enumerate() {
                let total = 1u64 << class.len();
                let mut start = 1;
                while start < total {
                    tasks.push((c, start));
                    start = ((start >> CHUNK_BITS) + 1) << CHUNK_BITS;
                }
            }
            exec.find_first(tasks.len(), |t| {
                let (c, start) = tasks[t];
                let (a, class) = &classes[c];
                let total = 1u64 << class.len();
                let end = (((start >> CHUNK_BITS) + 1) << CHUNK_BITS).min(total);
                let mut xs = Vec::with_capacity(class.len());
                (start..end).find_map(|mask| {
                    xs.clear();
                    xs.extend((0..class.len()).filter(|k| mask & (1 << k) != 0).map(|k| class[k]));
                    instance(*a, &xs)
                })
            })
        }
        Regime::Sampled { samples, seed } => {
            let mut rng = rng_for(seed, 4);
            let instances: Vec<(usize, Vec<usize>)> = (0..samples)
                .filter_map(|_| {
                    let (a, class) = classes.choose(&mut rng)?;
                    let xs = random_subset(&mut rng, class);
                    (!xs.is_empty()).then_some((*a, xs))
                })
                .collect();
            exec.find_first(instances.len(), |s| instance(instances[s].0, &instances[s].1))
        }
    }
}

fn axiom5<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, exec: Exec) -> Option<String> {
    let n = idx.len();
    exec.find_first(n * n, |p| {
        let (x, y) = (p / n, p % n);
        if !idx.le(x, y) {
            return None;
        }
        (0..idx.kappa())
            .take_while(|&a| a == 0 || idx.eq(a - 1, x, y))
            .find(|&a| !idx.sq(a, x, y))
            .map(|a| {
                format!(
                    "{} ≤ {} and they agree below stage {a}, but not {} ⊑_{a} {}",
                    idx.render(x),
                    idx.render(y),
                    idx.render(x),
                    idx.render(y)
                )
            })
    })
}

fn relation<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, a: usize) -> Vec<(usize, usize)> {
    let n = idx.len();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| idx.sq(a, x, y))
        .collect()
}

fn axiom6_instance<M: StratifiedLattice>(
    idx: &CarrierIndex<'_, M>,
    a: usize,
    pairs: &[(usize, usize)],
) -> Option<String> {
    let xs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let (lx, ly) = match (idx.lub_idx(&xs), idx.lub_idx(&ys)) {
        (Ok(lx), Ok(ly)) => (lx, ly),
        (Err(e), _) | (_, Err(e)) => return Some(e),
    };
    (!idx.sq(a, lx, ly)).then(|| {
        format!(
            "{} ⊑_{a} {} pointwise, but their lubs {} and {} are not related",
            idx.render_set(&xs),
            idx.render_set(&ys),
            idx.render(lx),
            idx.render(ly)
        )
    })
}

/// Relations this small are also checked with three-element index sets.
const TERNARY_LIMIT: usize = 60;

fn axiom6<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, regime: Regime, exec: Exec) -> Option<String> {
    let rels: Vec<Vec<(usize, usize)>> = (0..idx.kappa()).map(|a| relation(idx, a)).collect();
    match regime {
        Regime::Exhaustive => {
            let tasks: Vec<(usize, usize)> = (0..idx.kappa())
                .flat_map(|a| (0..rels[a].len()).map(move |i| (a, i)))
                .collect();
            exec.find_first(tasks.len(), |t| {
                let (a, i) = tasks[t];
                let r = &rels[a];
                (i..r.len()).find_map(|j| {
                    axiom6_instance(idx, a, &[r[i], r[j]]).or_else(|| {
                        if r.len() > TERNARY_LIMIT {
                            return None;
                        }
                        (j..r.len()).find_map(|k| axiom6_instance(idx, a, &[r[i], r[j], r[k]]))
                    })
                })
            })
        }
        Regime::Sampled { samples, seed } => {
            let mut rng = rng_for(seed, 6);
            let instances: Vec<(usize, Vec<(usize, usize)>)> = (0..samples)
                .map(|_| {
                    let a = rng.gen_range(0..idx.kappa());
                    let size = rng.gen_range(2..=4);
                    let family = (0..size)
                        .map(|_| *rels[a].choose(&mut rng).expect("relations are reflexive"))
                        .collect();
                    (a, family)
                })
                .collect();
            exec.find_first(instances.len(), |s| axiom6_instance(idx, instances[s].0, &instances[s].1))
        }
    }
}

/// `⊑_α`-chains of length `1..=max_len` without repeated consecutive entries.
fn chains<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, a: usize, max_len: usize) -> Vec<Vec<usize>> {
    let n = idx.len();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && idx.sq(a, x, y)).collect())
        .collect();
    let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    let mut frontier = out.clone();
    for _ in 1..max_len {
        let next: Vec<Vec<usize>> = frontier
            .iter()
            .flat_map(|c| {
                let last = *c.last().expect("chains are nonempty");
                succ[last].iter().map(move |&y| {
                    let mut d = c.clone();
                    d.push(y);
                    d
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn axiom7_instance<M: StratifiedLattice>(
    idx: &CarrierIndex<'_, M>,
    a: usize,
    family: &[&[usize]],
) -> Option<String> {
    let len = family.iter().map(|c| c.len()).max().unwrap_or(0);
    let at = |c: &[usize], k: usize| c[k.min(c.len() - 1)];
    let joined: Result<Vec<usize>, String> = (0..len)
        .map(|k| idx.lub_idx(&family.iter().map(|c| at(c, k)).collect::<Vec<_>>()))
        .collect();
    let joined = match joined {
        Ok(j) => j,
        Err(e) => return Some(e),
    };
    let lhs = match idx.alpha_lub_idx(a, joined[0], &joined) {
        Ok(l) => l,
        Err(e) => return Some(e),
    };
    let sups: Result<Vec<usize>, String> = family.iter().map(|c| idx.alpha_lub_idx(a, c[0], c)).collect();
    let sups = match sups {
        Ok(s) => s,
        Err(e) => return Some(e),
    };
    let rhs = match idx.lub_idx(&sups) {
        Ok(r) => r,
        Err(e) => return Some(e),
    };
    (!idx.eq(a, lhs, rhs)).then(|| {
        let chains: Vec<String> = family.iter().map(|c| idx.render_set(c)).collect();
        format!(
            "chains {}: stage-{a} supremum of the joins is {}, join of the stage-{a} suprema is {}",
            chains.join(" and "),
            idx.render(lhs),
            idx.render(rhs)
        )
    })
}

fn axiom7<M: StratifiedLattice>(idx: &CarrierIndex<'_, M>, regime: Regime, exec: Exec) -> Option<String> {
    match regime {
        Regime::Exhaustive => {
            let max_len = if idx.len() <= 9 { 3 } else { 2 };
            let all: Vec<Vec<Vec<usize>>> = (0..idx.kappa()).map(|a| chains(idx, a, max_len)).collect();
            let tasks: Vec<(usize, usize)> = (0..idx.kappa())
                .flat_map(|a| (0..all[a].len()).map(move |i| (a, i)))
                .collect();
            exec.find_first(tasks.len(), |t| {
                let (a, i) = tasks[t];
                let cs = &all[a];
                (i..cs.len()).find_map(|j| axiom7_instance(idx, a, &[&cs[i], &cs[j]]))
            })
        }
        Regime::Sampled { samples, seed } => {
            let mut rng = rng_for(seed, 7);
            let n = idx.len();
            let instances: Vec<(usize, Vec<Vec<usize>>)> = (0..samples)
                .map(|_| {
                    let a = rng.gen_range(0..idx.kappa());
                    let size = rng.gen_range(2..=3);
                    let family = (0..size)
                        .map(|_| {
                            let len = rng.gen_range(1..=4);
                            let mut c = vec![rng.gen_range(0..n)];
                            while c.len() < len {
                                let last = *c.last().expect("nonempty");
                                let succ: Vec<usize> = (0..n).filter(|&y| idx.sq(a, last, y)).collect();
                                c.push(*succ.choose(&mut rng).expect("reflexive"));
                            }
                            c
                        })
                        .collect();
                    (a, family)
                })
                .collect();
            exec.find_first(instances.len(), |s| {
                let (a, family) = &instances[s];
                let refs: Vec<&[usize]> = family.iter().map(|c| c.as_slice()).collect();
                axiom7_instance(idx, *a, &refs)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{TruthModelV, TruthValue};
    use crate::zoo::{ClassicalModel, InterpretationModel, NonStandardProduct};

    fn cfg(limit: usize) -> CheckConfig {
        CheckConfig {
            exhaustive_limit: limit,
            ..CheckConfig::default()
        }
    }

    #[test]
    fn truth_models_pass_everything() {
        for k in 1..=4 {
            let m = TruthModelV::new(k).unwrap();
            assert!(check_structure(&m, &cfg(9)).unwrap().passed());
            for r in check_all(&m, &cfg(9)).unwrap() {
                assert!(r.passed(), "V:{k} {r}");
                assert_eq!(r.regime, Regime::Exhaustive);
            }
        }
    }

    #[test]
    fn trivial_model_passes() {
        let m = ClassicalModel::trivial();
        assert!(check_all(&m, &cfg(8)).unwrap().iter().all(AxiomReport::passed));
    }

    #[test]
    fn chain_diamond_fails_axiom5_only() {
        let m = NonStandardProduct::chain4_diamond4(2).unwrap();
        let reports = check_all(&m, &cfg(16)).unwrap();
        for r in &reports[..4] {
            assert!(r.passed(), "{r}");
        }
        let w = reports[4].witness.as_deref().expect("axiom 5 fails");
        assert!(w.contains("(0,a) ≤ (0,b)"), "{w}");
    }

    #[test]
    fn unvalidated_nonstandard_product_breaks_axiom3() {
        let names = ["0", "a", "b", "1"];
        let chain = crate::FiniteLattice::chain(&names).unwrap();
        let diamond =
            crate::FiniteLattice::from_covers(&names, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let m = NonStandardProduct::new_unvalidated(vec![(diamond, chain); 2]).unwrap();
        assert!(!check_axiom(&m, 3, &cfg(16)).unwrap().passed());
    }

    #[test]
    fn size_limit_and_sampling() {
        let m = InterpretationModel::with_size(2, 2).unwrap();
        let err = check_axiom(&m, 3, &cfg(8)).unwrap_err();
        assert!(matches!(err, LatticeError::SizeLimit { .. }));
        // element-only axioms never need sampling
        assert!(check_axiom(&m, 1, &cfg(8)).unwrap().passed());
        let sampled = CheckConfig {
            samples: Some(500),
            seed: 7,
            ..cfg(8)
        };
        let r = check_axiom(&m, 3, &sampled).unwrap();
        assert!(r.passed());
        assert_eq!(r.regime, Regime::Sampled { samples: 500, seed: 7 });
        assert!(check_axiom(&m, 9, &sampled).is_err());
        assert!(check_axiom(&m, 1, &cfg(MAX_EXHAUSTIVE_LIMIT + 1)).is_err());
    }

    #[test]
    fn modes_agree() {
        let m = NonStandardProduct::chain4_diamond4(2).unwrap();
        let seq = CheckConfig {
            exec: Exec::Sequential,
            ..cfg(16)
        };
        let par = CheckConfig {
            exec: Exec::Parallel,
            ..cfg(16)
        };
        assert_eq!(check_all(&m, &seq).unwrap(), check_all(&m, &par).unwrap());
    }

    /// V with the stage supremum returning the plain lub.
    struct Corrupted(TruthModelV);

    impl StratifiedLattice for Corrupted {
        type Elem = TruthValue;
        fn kappa(&self) -> usize {
            self.0.kappa()
        }
        fn carrier_size(&self) -> u128 {
            self.0.carrier_size()
        }
        fn elements(&self) -> Vec<TruthValue> {
            self.0.elements()
        }
        fn le(&self, x: &TruthValue, y: &TruthValue) -> bool {
            self.0.le(x, y)
        }
        fn lub(&self, xs: &[&TruthValue]) -> TruthValue {
            self.0.lub(xs)
        }
        fn sqle_alpha(&self, s: StageIndex, x: &TruthValue, y: &TruthValue) -> bool {
            self.0.sqle_alpha(s, x, y)
        }
        fn alpha_lub(&self, s: StageIndex, anchor: &TruthValue, xs: &[&TruthValue]) -> Result<TruthValue, LatticeError> {
            if xs.is_empty() {
                return self.0.alpha_lub(s, anchor, xs);
            }
            Ok(self.0.lub(xs))
        }
    }

    #[test]
    fn corrupted_supremum_is_caught() {
        let m = Corrupted(TruthModelV::new(3).unwrap());
        let s0 = StageIndex::ZERO;
        assert_eq!(
            m.alpha_lub_valid(s0, &TruthValue::False(1), &[&TruthValue::False(1), &TruthValue::True(1)]),
            Ok(false)
        );
        let r = check_axiom(&m, 3, &cfg(8)).unwrap();
        assert!(!r.passed());
    }
}
