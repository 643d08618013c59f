//! Seeded random normal programs for cross-checking.

use rand::Rng;

use super::program::{Formula, Program, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomProgramParams {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_body: usize,
    /// Probability in percent that a body literal is negated.
    pub neg_percent: u32,
}

impl Default for RandomProgramParams {
    fn default() -> Self {
        RandomProgramParams {
            max_atoms: 6,
            max_rules: 12,
            max_body: 3,
            neg_percent: 50,
        }
    }
}

/// A normalized program over atoms `a0, a1, …` with between one and
/// `max_atoms` atoms and one to `max_rules` rules whose bodies are
/// conjunctions of up to `max_body` literals.
pub fn random_program<R: Rng + ?Sized>(rng: &mut R, params: RandomProgramParams) -> Program {
    let n = rng.gen_range(1..=params.max_atoms.max(1));
    let atoms: Vec<String> = (0..n).map(|k| format!("a{k}")).collect();
    let rules = (0..rng.gen_range(1..=params.max_rules.max(1)))
        .map(|_| {
            let head = rng.gen_range(0..n);
            let body = (0..rng.gen_range(0..=params.max_body))
                .map(|_| {
                    let atom = Formula::Atom(rng.gen_range(0..n));
                    if rng.gen_ratio(params.neg_percent.min(100), 100) {
                        Formula::neg(atom)
                    } else {
                        atom
                    }
                })
                .collect();
            Rule {
                head,
                body: Formula::and(body),
            }
        })
        .collect();
    Program::new(atoms, rules).normalize()
}
