//! Grounding over the constants that occur in the program.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::program::{Formula, Program, Rule};
use super::syntax::{parse, SourceAtom, SourceLiteral, SourceProgram, SourceRule, Term};
use super::LpError;

/// Maximum number of ground rule instances.
pub const GROUNDING_LIMIT: u128 = 1_000_000;

fn ground_name(atom: &SourceAtom, binding: &HashMap<&str, &str>) -> String {
    if atom.args.is_empty() {
        return atom.pred.clone();
    }
    let args: Vec<&str> = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) => c.as_str(),
            Term::Var(v) => binding[v.as_str()],
        })
        .collect();
    format!("{}({})", atom.pred, args.join(","))
}

fn vars_of(atom: &SourceAtom, out: &mut BTreeSet<String>) {
    for t in &atom.args {
        if let Term::Var(v) = t {
            out.insert(v.clone());
        }
    }
}

/// Checks that every variable of a rule instance (one disjunct) occurs in a
/// positive body atom.
fn check_safety(rule: &SourceRule, conj: &[SourceLiteral]) -> Result<BTreeSet<String>, LpError> {
    let mut safe = BTreeSet::new();
    for lit in conj {
        if let SourceLiteral::Pos(a) = lit {
            vars_of(a, &mut safe);
        }
    }
    let check = |atom: &SourceAtom, role: &str| -> Result<(), LpError> {
        let mut vs = BTreeSet::new();
        vars_of(atom, &mut vs);
        match vs.difference(&safe).next() {
            None => Ok(()),
            Some(v) => Err(LpError::Safety {
                line: atom.line,
                col: atom.col,
                msg: format!(
                    "variable {v} in {role} {} does not occur in a positive body atom",
                    atom.pred
                ),
            }),
        }
    };
    check(&rule.head, "head")?;
    for lit in conj {
        if let SourceLiteral::Neg(a) = lit {
            check(a, "negated atom")?;
        }
    }
    Ok(safe)
}

/// Grounds and completes a parsed program.
///
/// Ground rules keep their full body. A rule with variables is split into
/// one rule per disjunct, and every disjunct is instantiated with all
/// assignments of program constants to its variables.
pub fn ground(src: &SourceProgram) -> Result<Program, LpError> {
    let mut constants = BTreeSet::new();
    for rule in &src.rules {
        let atoms = std::iter::once(&rule.head).chain(rule.body.disjuncts.iter().flatten().filter_map(|l| match l {
            SourceLiteral::Pos(a) | SourceLiteral::Neg(a) => Some(a),
            _ => None,
        }));
        for a in atoms {
            for t in &a.args {
                if let Term::Const(c) = t {
                    constants.insert(c.clone());
                }
            }
        }
    }
    let constants: Vec<String> = constants.into_iter().collect();

    let mut names: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut intern = |name: String| -> usize {
        *names.entry(name.clone()).or_insert_with(|| {
            order.push(name);
            order.len() - 1
        })
    };
    let mut rules = Vec::new();
    let mut instances: u128 = 0;

    let literal = |lit: &SourceLiteral, binding: &HashMap<&str, &str>, intern: &mut dyn FnMut(String) -> usize| match lit {
        SourceLiteral::Pos(a) => Formula::Atom(intern(ground_name(a, binding))),
        SourceLiteral::Neg(a) => Formula::neg(Formula::Atom(intern(ground_name(a, binding)))),
        SourceLiteral::True => Formula::True,
        SourceLiteral::False => Formula::False,
    };

    for rule in &src.rules {
        let is_ground = rule.head.is_ground()
            && rule.body.disjuncts.iter().flatten().all(|l| match l {
                SourceLiteral::Pos(a) | SourceLiteral::Neg(a) => a.is_ground(),
                _ => true,
            });
        if is_ground {
            let empty = HashMap::new();
            let head = intern(ground_name(&rule.head, &empty));
            let body = Formula::or(
                rule.body
                    .disjuncts
                    .iter()
                    .map(|c| Formula::and(c.iter().map(|l| literal(l, &empty, &mut intern)).collect()))
                    .collect(),
            );
            instances += 1;
            rules.push(Rule { head, body });
            continue;
        }
        for conj in &rule.body.disjuncts {
            let vars: Vec<String> = check_safety(rule, conj)?.into_iter().collect();
            let count = (constants.len() as u128)
                .checked_pow(vars.len() as u32)
                .unwrap_or(u128::MAX);
            instances = instances.saturating_add(count);
            if instances > GROUNDING_LIMIT {
                return Err(LpError::SizeLimit {
                    what: "number of ground rule instances".into(),
                    size: instances,
                    limit: GROUNDING_LIMIT,
                });
            }
            let mut choice = vec![0usize; vars.len()];
            for _ in 0..count {
                let binding: HashMap<&str, &str> = vars
                    .iter()
                    .zip(&choice)
                    .map(|(v, &c)| (v.as_str(), constants[c].as_str()))
                    .collect();
                let head = intern(ground_name(&rule.head, &binding));
                let body = Formula::and(conj.iter().map(|l| literal(l, &binding, &mut intern)).collect());
                rules.push(Rule { head, body });
                for slot in choice.iter_mut().rev() {
                    *slot += 1;
                    if *slot < constants.len() {
                        break;
                    }
                    *slot = 0;
                }
            }
        }
    }
    if order.is_empty() {
        return Err(LpError::Empty);
    }
    Ok(Program::new(order, rules).normalize())
}

/// Parses, grounds and completes program text.
pub fn parse_program(text: &str) -> Result<Program, LpError> {
    ground(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_program_gets_completed() {
        let p = parse_program("p :- not q.\nq :- not r.\ns :- p.\ns :- not s.\n").unwrap();
        assert_eq!(p.atoms(), &["p", "q", "r", "s"]);
        assert_eq!(p.rules().len(), 5);
        assert_eq!(p.rules()[4], Rule { head: 2, body: Formula::False });
    }

    #[test]
    fn facts_become_true() {
        let p = parse_program("p.").unwrap();
        assert_eq!(p.rules(), &[Rule { head: 0, body: Formula::True }]);
    }

    #[test]
    fn ground_disjunction_kept_whole() {
        let p = parse_program("p :- q; not r.").unwrap();
        let q = p.atom_index("q").unwrap();
        let r = p.atom_index("r").unwrap();
        assert_eq!(
            p.rules()[0].body,
            Formula::Or(vec![Formula::Atom(q), Formula::neg(Formula::Atom(r))])
        );
    }

    #[test]
    fn path_instances() {
        let p = parse_program("edge(a,b).\npath(X,Y) :- edge(X,Y).").unwrap();
        let path_rules = p
            .rules()
            .iter()
            .filter(|r| p.atoms()[r.head].starts_with("path(") && r.body != Formula::False)
            .count();
        assert_eq!(path_rules, 4);
        assert!(p.atom_index("path(b,a)").is_some());
        assert!(p.atom_index("edge(b,b)").is_some());
        assert_eq!(p.atoms().len(), 8);
    }

    #[test]
    fn unsafe_rules_rejected() {
        for text in ["p(X) :- q.", "p(X).", "p :- q(X), not r(Y)."] {
            assert!(matches!(parse_program(text), Err(LpError::Safety { .. })), "{text}");
        }
        assert!(parse_program("p(X) :- q(X); r.").is_err());
    }

    #[test]
    fn empty_program_rejected() {
        assert_eq!(parse_program(""), Err(LpError::Empty));
        assert_eq!(parse_program("% only a comment"), Err(LpError::Empty));
    }

    #[test]
    fn normalization_commutes_with_grounding() {
        let text = "a :- not b.\nb :- c, not a.";
        let p = parse_program(text).unwrap();
        assert_eq!(p.normalize(), p);
    }

    #[test]
    fn instance_cap() {
        let mut text = String::from("p(X1,X2,X3,X4,X5) :- q(X1), q(X2), q(X3), q(X4), q(X5).\n");
        for c in 0..20 {
            text.push_str(&format!("q(c{c}).\n"));
        }
        assert!(matches!(parse_program(&text), Err(LpError::SizeLimit { .. })));
    }
}
