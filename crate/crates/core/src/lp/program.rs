use std::collections::BTreeSet;
use std::fmt;

/// A rule body. Atoms are indices into the program's atom list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(usize),
    Neg(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    True,
    False,
}

impl Formula {
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    /// Conjunction, collapsing the empty and singleton cases.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().expect("one element"),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction, collapsing the empty and singleton cases.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().expect("one element"),
            _ => Formula::Or(parts),
        }
    }

    /// Atoms occurring anywhere in the formula.
    pub fn atoms(&self, out: &mut BTreeSet<usize>) {
        match self {
            Formula::Atom(a) => {
                out.insert(*a);
            }
            Formula::Neg(f) => f.atoms(out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.atoms(out)),
            Formula::True | Formula::False => {}
        }
    }

    /// Nesting depth of negation.
    pub fn negation_depth(&self) -> usize {
        match self {
            Formula::Neg(f) => 1 + f.negation_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::negation_depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn write(&self, atoms: &[String], top: bool, out: &mut String) {
        match self {
            Formula::Atom(a) => out.push_str(&atoms[*a]),
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Neg(f) => {
                out.push_str("not ");
                f.write(atoms, false, out);
            }
            Formula::And(fs) | Formula::Or(fs) => {
                let sep = if matches!(self, Formula::And(_)) { ", " } else { "; " };
                if !top {
                    out.push('(');
                }
                for (i, f) in fs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    f.write(atoms, matches!(self, Formula::Or(_)) && matches!(f, Formula::And(_)) && top, out);
                }
                if !top {
                    out.push(')');
                }
            }
        }
    }

    /// Renders with the given atom names.
    pub fn render(&self, atoms: &[String]) -> String {
        let mut out = String::new();
        self.write(atoms, true, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: usize,
    pub body: Formula,
}

/// A propositional program over a fixed, lexicographically sorted atom list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    atoms: Vec<String>,
    rules: Vec<Rule>,
}

impl Program {
    /// Atoms are sorted and deduplicated; rule indices refer to the given
    /// order and are remapped.
    pub fn new(atoms: Vec<String>, rules: Vec<Rule>) -> Self {
        let mut sorted = atoms.clone();
        sorted.sort();
        sorted.dedup();
        let remap: Vec<usize> = atoms
            .iter()
            .map(|a| sorted.binary_search(a).expect("present"))
            .collect();
        let rules = rules
            .into_iter()
            .map(|r| Rule {
                head: remap[r.head],
                body: remap_formula(&r.body, &remap),
            })
            .collect();
        Program { atoms: sorted, rules }
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.as_str().cmp(name)).ok()
    }

    /// Bodies of the rules with the given head.
    pub fn bodies(&self, head: usize) -> impl Iterator<Item = &Formula> {
        self.rules.iter().filter(move |r| r.head == head).map(|r| &r.body)
    }

    /// Completion: every atom without a rule gets `a ← false`.
    pub fn normalize(&self) -> Program {
        let mut rules = self.rules.clone();
        for a in 0..self.atoms.len() {
            if !self.rules.iter().any(|r| r.head == a) {
                rules.push(Rule {
                    head: a,
                    body: Formula::False,
                });
            }
        }
        Program {
            atoms: self.atoms.clone(),
            rules,
        }
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.atoms.len()).all(|a| self.rules.iter().any(|r| r.head == a))
    }

    /// Largest negation depth over all bodies.
    pub fn negation_depth(&self) -> usize {
        self.rules.iter().map(|r| r.body.negation_depth()).max().unwrap_or(0)
    }
}

fn remap_formula(f: &Formula, remap: &[usize]) -> Formula {
    match f {
        Formula::Atom(a) => Formula::Atom(remap[*a]),
        Formula::Neg(g) => Formula::neg(remap_formula(g, remap)),
        Formula::And(fs) => Formula::And(fs.iter().map(|g| remap_formula(g, remap)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| remap_formula(g, remap)).collect()),
        Formula::True => Formula::True,
        Formula::False => Formula::False,
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            match &r.body {
                Formula::True => writeln!(f, "{}.", self.atoms[r.head])?,
                body => writeln!(f, "{} :- {}.", self.atoms[r.head], body.render(&self.atoms))?,
            }
        }
        Ok(())
    }
}
