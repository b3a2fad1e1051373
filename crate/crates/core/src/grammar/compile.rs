//! Pattern expressions to automata.
//!
//! Every edge of an [`Automaton`] consumes a token, so expressions are
//! compiled with the position (Glushkov) construction, which needs no
//! epsilon transitions: one node per predicate occurrence, plus the start
//! node. Edges out of a node are added in ascending position order, which
//! makes the engine's insertion-order tie-break follow the pattern text.

use std::collections::{BTreeSet, HashMap};

use super::dsl::{self, CompileError, Expr};
use crate::automata::{build_automaton, Automaton, AutomatonSpec, HookRegistry, Predicate, DEFAULT_STEP_BUDGET};

/// Default bound for a bare `any*`.
pub const DEFAULT_ANY_STAR_MAX: usize = 12;

#[derive(Debug, Clone)]
pub struct CompileOptions {
    /// Bound applied to `any*` without `(max=N)`; `None` makes it an error.
    pub any_star_default: Option<usize>,
    pub step_budget: usize,
    pub subpatterns: HashMap<String, String>,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            any_star_default: Some(DEFAULT_ANY_STAR_MAX),
            step_budget: DEFAULT_STEP_BUDGET,
            subpatterns: dsl::builtin_subpatterns(),
        }
    }
}

/// Parses and compiles a pattern body.
pub fn compile_dsl(src: &str, opts: &CompileOptions) -> Result<Automaton, CompileError> {
    let expr = dsl::parse(src)?;
    let expr = expand(expr, opts, &mut Vec::new())?;
    let spec = glushkov(&expr);
    let automaton = build_automaton(&spec, &HookRegistry::builtin()).expect("position automaton is well-formed");
    Ok(automaton.with_budget(opts.step_budget))
}

/// Inlines sub-patterns and unrolls `any*`.
fn expand(e: Expr, opts: &CompileOptions, stack: &mut Vec<String>) -> Result<Expr, CompileError> {
    Ok(match e {
        Expr::Atom(p) => Expr::Atom(p),
        Expr::Seq(items) => Expr::Seq(items.into_iter().map(|i| expand(i, opts, stack)).collect::<Result<_, _>>()?),
        Expr::Alt(items) => Expr::Alt(items.into_iter().map(|i| expand(i, opts, stack)).collect::<Result<_, _>>()?),
        Expr::Opt(inner) => Expr::Opt(Box::new(expand(*inner, opts, stack)?)),
        Expr::AnyStar { max, position } => {
            let n = max.or(opts.any_star_default).ok_or(CompileError::UnboundedAnyStar { position })?;
            // (any (any (…)?)?)?
            let mut e = Expr::Opt(Box::new(Expr::Atom(Predicate::Any)));
            for _ in 1..n {
                e = Expr::Opt(Box::new(Expr::Seq(vec![Expr::Atom(Predicate::Any), e])));
            }
            e
        }
        Expr::Ref { name, .. } => {
            if stack.contains(&name) {
                return Err(CompileError::RecursiveSubpattern(name));
            }
            let body = opts.subpatterns.get(&name).ok_or_else(|| CompileError::UnknownSubpattern(name.clone()))?;
            let parsed = dsl::parse(body)?;
            stack.push(name);
            let out = expand(parsed, opts, stack);
            stack.pop();
            out?
        }
    })
}

struct Glushkov {
    preds: Vec<Predicate>,
    follow: Vec<BTreeSet<usize>>,
}

struct Sets {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

impl Glushkov {
    fn visit(&mut self, e: &Expr) -> Sets {
        match e {
            Expr::Atom(p) => {
                let i = self.preds.len();
                self.preds.push(p.clone());
                self.follow.push(BTreeSet::new());
                Sets { nullable: false, first: BTreeSet::from([i]), last: BTreeSet::from([i]) }
            }
            Expr::Seq(items) => {
                let mut acc = Sets { nullable: true, first: BTreeSet::new(), last: BTreeSet::new() };
                for item in items {
                    let s = self.visit(item);
                    for &l in &acc.last {
                        self.follow[l].extend(s.first.iter().copied());
                    }
                    if acc.nullable {
                        acc.first.extend(s.first.iter().copied());
                    }
                    acc.last = if s.nullable { acc.last.union(&s.last).copied().collect() } else { s.last };
                    acc.nullable &= s.nullable;
                }
                acc
            }
            Expr::Alt(items) => {
                let mut acc = Sets { nullable: false, first: BTreeSet::new(), last: BTreeSet::new() };
                for item in items {
                    let s = self.visit(item);
                    acc.nullable |= s.nullable;
                    acc.first.extend(s.first);
                    acc.last.extend(s.last);
                }
                acc
            }
            Expr::Opt(inner) => {
                let mut s = self.visit(inner);
                s.nullable = true;
                s
            }
            Expr::AnyStar { .. } | Expr::Ref { .. } => unreachable!("expanded before construction"),
        }
    }
}

fn glushkov(e: &Expr) -> AutomatonSpec {
    let mut g = Glushkov { preds: Vec::new(), follow: Vec::new() };
    let root = g.visit(e);
    let mut spec = AutomatonSpec::new();
    for i in 0..g.preds.len() {
        let id = spec.add_node(root.last.contains(&i));
        debug_assert_eq!(id as usize, i + 1);
    }
    for &p in &root.first {
        spec.add_edge(0, p as u32 + 1, g.preds[p].clone());
    }
    for (q, follows) in g.follow.iter().enumerate() {
        for &p in follows {
            spec.add_edge(q as u32 + 1, p as u32 + 1, g.preds[p].clone());
        }
    }
    spec
}
