//! The CL12 calculus: rule schemata, proof objects, proof checking and
//! bounded backward proof search.
//!
//! A proof is a sequence of steps, each a sequent together with the rule and
//! the indices of earlier steps used as premises; the last step is the proved
//! sequent. The checker verifies Choose and Replicate steps by recomputing
//! the premise from the conclusion, and Wait steps by generating the demanded
//! premise set and testing stability through the classical oracle.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::classical::{is_stable, Budgets, Verdict};
use crate::syntax::{
    substitute, surface_occurrences, ChoiceKind, Constant, Formula, OccurrencePath, Sequent, Term,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ChooseTerm {
    Const(Constant),
    Var(String),
}

impl ChooseTerm {
    pub fn to_term(&self) -> Term {
        match self {
            ChooseTerm::Const(c) => Term::Const(*c),
            ChooseTerm::Var(v) => Term::Var(v.clone()),
        }
    }
}

impl fmt::Display for ChooseTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChooseTerm::Const(c) => write!(f, "{c}"),
            ChooseTerm::Var(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule {
    /// Resolve a surface choice disjunction in the succedent.
    ChooseOr { path: OccurrencePath, index: u8 },
    /// Resolve a surface choice conjunction in an antecedent member.
    ChooseAnd {
        member: usize,
        path: OccurrencePath,
        index: u8,
    },
    /// Instantiate a surface choice-existential in the succedent.
    ChooseEx { path: OccurrencePath, term: ChooseTerm },
    /// Instantiate a surface choice-universal in an antecedent member.
    ChooseAll {
        member: usize,
        path: OccurrencePath,
        term: ChooseTerm,
    },
    /// Append a copy of an antecedent member.
    Replicate { member: usize },
    Wait,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::ChooseOr { .. } => "chor-choose",
            Rule::ChooseAnd { .. } => "chand-choose",
            Rule::ChooseEx { .. } => "chex-choose",
            Rule::ChooseAll { .. } => "chall-choose",
            Rule::Replicate { .. } => "replicate",
            Rule::Wait => "wait",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofStep {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

impl Proof {
    pub fn conclusion(&self) -> &Sequent {
        &self
            .steps
            .last()
            .expect("proof has at least one step")
            .sequent
    }

    pub fn replicate_count(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.rule, Rule::Replicate { .. }))
            .count()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    PremiseCount { expected: usize, got: usize },
    NotSurface,
    NoSuchMember,
    PremiseMismatch { expected: String },
    BadChooseTerm(String),
    MissingWaitPremise(String),
    Unstable,
    UnknownStability,
    BadPremiseIndex,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PremiseCount { expected, got } => {
                write!(f, "rule takes {expected} premise(s), {got} given")
            }
            Violation::NotSurface => f.write_str("path is not a surface occurrence of that kind"),
            Violation::NoSuchMember => f.write_str("no such antecedent member"),
            Violation::PremiseMismatch { expected } => {
                write!(f, "premise does not match; expected {expected}")
            }
            Violation::BadChooseTerm(m) => write!(f, "bad choose term: {m}"),
            Violation::MissingWaitPremise(m) => write!(f, "missing wait premise: {m}"),
            Violation::Unstable => f.write_str("sequent is unstable"),
            Violation::UnknownStability => f.write_str("stability could not be decided"),
            Violation::BadPremiseIndex => f.write_str("premise index out of range"),
        }
    }
}

fn surface_at(f: &Formula, path: &OccurrencePath, kind: ChoiceKind) -> bool {
    surface_occurrences(f, kind).contains(path)
}

/// The premise of a Choose or Replicate step, recomputed from the conclusion.
pub fn choose_premise(conclusion: &Sequent, rule: &Rule) -> Result<Sequent, Violation> {
    match rule {
        Rule::ChooseOr { path, index } => {
            if !surface_at(&conclusion.succedent, path, ChoiceKind::ChOr) {
                return Err(Violation::NotSurface);
            }
            let sub = conclusion.succedent.subformula(path).unwrap();
            let child = sub.children()[*index as usize].clone();
            let mut premise = conclusion.clone();
            premise.succedent = conclusion.succedent.replace_at(path, child);
            Ok(premise)
        }
        Rule::ChooseAnd {
            member,
            path,
            index,
        } => {
            let g = conclusion
                .antecedent
                .get(*member)
                .ok_or(Violation::NoSuchMember)?;
            if !surface_at(g, path, ChoiceKind::ChAnd) {
                return Err(Violation::NotSurface);
            }
            let sub = g.subformula(path).unwrap();
            let child = sub.children()[*index as usize].clone();
            let mut premise = conclusion.clone();
            premise.antecedent[*member] = g.replace_at(path, child);
            Ok(premise)
        }
        Rule::ChooseEx { path, term } => {
            if !surface_at(&conclusion.succedent, path, ChoiceKind::ChEx) {
                return Err(Violation::NotSurface);
            }
            let sub = conclusion.succedent.subformula(path).unwrap();
            let (x, body) = match sub {
                Formula::ChEx(x, a) => (x.clone(), (**a).clone()),
                _ => unreachable!(),
            };
            let inst = instantiate(&body, &x, term)?;
            let mut premise = conclusion.clone();
            premise.succedent = conclusion.succedent.replace_at(path, inst);
            check_choose_var(term, &premise)?;
            Ok(premise)
        }
        Rule::ChooseAll { member, path, term } => {
            let g = conclusion
                .antecedent
                .get(*member)
                .ok_or(Violation::NoSuchMember)?;
            if !surface_at(g, path, ChoiceKind::ChAll) {
                return Err(Violation::NotSurface);
            }
            let sub = g.subformula(path).unwrap();
            let (x, body) = match sub {
                Formula::ChAll(x, a) => (x.clone(), (**a).clone()),
                _ => unreachable!(),
            };
            let inst = instantiate(&body, &x, term)?;
            let mut premise = conclusion.clone();
            premise.antecedent[*member] = g.replace_at(path, inst);
            check_choose_var(term, &premise)?;
            Ok(premise)
        }
        Rule::Replicate { member } => {
            let g = conclusion
                .antecedent
                .get(*member)
                .ok_or(Violation::NoSuchMember)?;
            let mut premise = conclusion.clone();
            premise.antecedent.push(g.clone());
            Ok(premise)
        }
        Rule::Wait => unreachable!("wait has no single premise"),
    }
}

fn instantiate(body: &Formula, x: &str, term: &ChooseTerm) -> Result<Formula, Violation> {
    let mut m = BTreeMap::new();
    m.insert(x.to_owned(), term.to_term());
    substitute(body, &m).map_err(|e| Violation::BadChooseTerm(e.to_string()))
}

/// The choose term must be a constant or a variable with no bound occurrence
/// in the premise.
fn check_choose_var(term: &ChooseTerm, premise: &Sequent) -> Result<(), Violation> {
    if let ChooseTerm::Var(v) = term {
        if premise.bound_vars().contains(v) {
            return Err(Violation::BadChooseTerm(format!(
                "variable {v} has bound occurrences in the premise"
            )));
        }
    }
    Ok(())
}

/// How a Wait premise (equivalently, a legal environment move on the
/// conclusion) arises.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WaitOrigin {
    /// A surface choice conjunction in the succedent, resolved to `index`.
    SuccedentPick { path: OccurrencePath, index: u8 },
    /// A surface choice disjunction in antecedent `member`.
    AntecedentPick {
        member: usize,
        path: OccurrencePath,
        index: u8,
    },
    /// A surface choice universal in the succedent, instantiated with a
    /// fresh variable.
    SuccedentFresh { path: OccurrencePath, var: String },
    /// A surface choice existential in an antecedent member.
    AntecedentFresh {
        member: usize,
        path: OccurrencePath,
        var: String,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WaitPremise {
    pub sequent: Sequent,
    pub origin: WaitOrigin,
}

fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = base.to_owned();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// The premises demanded by the four structural Wait conditions, with fresh
/// variables chosen deterministically (apostrophe suffixes).
pub fn wait_premises(s: &Sequent) -> Vec<WaitPremise> {
    let mut out = Vec::new();
    let all_vars = s.all_vars();
    for path in surface_occurrences(&s.succedent, ChoiceKind::ChAnd) {
        for index in 0..2u8 {
            let sub = s.succedent.subformula(&path).unwrap();
            let child = sub.children()[index as usize].clone();
            let mut premise = s.clone();
            premise.succedent = s.succedent.replace_at(&path, child);
            out.push(WaitPremise {
                sequent: premise,
                origin: WaitOrigin::SuccedentPick {
                    path: path.clone(),
                    index,
                },
            });
        }
    }
    for (member, g) in s.antecedent.iter().enumerate() {
        for path in surface_occurrences(g, ChoiceKind::ChOr) {
            for index in 0..2u8 {
                let sub = g.subformula(&path).unwrap();
                let child = sub.children()[index as usize].clone();
                let mut premise = s.clone();
                premise.antecedent[member] = g.replace_at(&path, child);
                out.push(WaitPremise {
                    sequent: premise,
                    origin: WaitOrigin::AntecedentPick {
                        member,
                        path: path.clone(),
                        index,
                    },
                });
            }
        }
    }
    for path in surface_occurrences(&s.succedent, ChoiceKind::ChAll) {
        let sub = s.succedent.subformula(&path).unwrap();
        let (x, body) = match sub {
            Formula::ChAll(x, a) => (x.clone(), (**a).clone()),
            _ => unreachable!(),
        };
        let y = fresh_var(&x, &all_vars);
        let mut m = BTreeMap::new();
        m.insert(x, Term::Var(y.clone()));
        let inst = substitute(&body, &m).expect("fresh variable cannot be captured");
        let mut premise = s.clone();
        premise.succedent = s.succedent.replace_at(&path, inst);
        out.push(WaitPremise {
            sequent: premise,
            origin: WaitOrigin::SuccedentFresh { path, var: y },
        });
    }
    for (member, g) in s.antecedent.iter().enumerate() {
        for path in surface_occurrences(g, ChoiceKind::ChEx) {
            let sub = g.subformula(&path).unwrap();
            let (x, body) = match sub {
                Formula::ChEx(x, a) => (x.clone(), (**a).clone()),
                _ => unreachable!(),
            };
            let y = fresh_var(&x, &all_vars);
            let mut m = BTreeMap::new();
            m.insert(x, Term::Var(y.clone()));
            let inst = substitute(&body, &m).expect("fresh variable cannot be captured");
            let mut premise = s.clone();
            premise.antecedent[member] = g.replace_at(&path, inst);
            out.push(WaitPremise {
                sequent: premise,
                origin: WaitOrigin::AntecedentFresh {
                    member,
                    path,
                    var: y,
                },
            });
        }
    }
    out
}

/// Matches `candidate` against `body` with free `x` replaced by a single
/// variable. `Some(None)` when `x` does not occur free (any fresh variable
/// yields the same premise); `Some(Some(y))` when every free occurrence
/// became the variable `y`.
fn match_instance(body: &Formula, x: &str, candidate: &Formula) -> Option<Option<String>> {
    fn terms(a: &Term, b: &Term, x: &str, shadowed: bool, y: &mut Option<String>) -> bool {
        match (a, b) {
            (Term::Var(v), _) if v == x && !shadowed => match b {
                Term::Var(w) => match y {
                    Some(prev) => prev == w,
                    None => {
                        *y = Some(w.clone());
                        true
                    }
                },
                _ => false,
            },
            (Term::Var(v), Term::Var(w)) => v == w,
            (Term::Const(c), Term::Const(d)) => c == d,
            (Term::App(f, fa), Term::App(g, ga)) => {
                f == g
                    && fa.len() == ga.len()
                    && fa.iter().zip(ga).all(|(s, t)| terms(s, t, x, shadowed, y))
            }
            _ => false,
        }
    }
    fn go(a: &Formula, b: &Formula, x: &str, shadowed: bool, y: &mut Option<String>) -> bool {
        match (a, b) {
            (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
            (Formula::Atom(p), Formula::Atom(q)) => {
                p.positive == q.positive
                    && p.pred == q.pred
                    && p.args.len() == q.args.len()
                    && p.args
                        .iter()
                        .zip(&q.args)
                        .all(|(s, t)| terms(s, t, x, shadowed, y))
            }
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::ChAnd(a1, a2), Formula::ChAnd(b1, b2))
            | (Formula::ChOr(a1, a2), Formula::ChOr(b1, b2)) => {
                go(a1, b1, x, shadowed, y) && go(a2, b2, x, shadowed, y)
            }
            (Formula::All(v, a1), Formula::All(w, b1))
            | (Formula::Ex(v, a1), Formula::Ex(w, b1))
            | (Formula::ChAll(v, a1), Formula::ChAll(w, b1))
            | (Formula::ChEx(v, a1), Formula::ChEx(w, b1)) => {
                v == w && go(a1, b1, x, shadowed || v == x, y)
            }
            _ => false,
        }
    }
    let mut y = None;
    if go(body, candidate, x, false, &mut y) {
        Some(y)
    } else {
        None
    }
}

/// Checks one step. For Wait, the four structural conditions plus stability;
/// extra premises beyond the demanded ones are permitted.
pub fn check_step(
    conclusion: &Sequent,
    rule: &Rule,
    premises: &[&Sequent],
    budgets: &Budgets,
) -> Result<(), Violation> {
    match rule {
        Rule::Wait => check_wait(conclusion, premises, budgets),
        _ => {
            if premises.len() != 1 {
                return Err(Violation::PremiseCount {
                    expected: 1,
                    got: premises.len(),
                });
            }
            let expected = choose_premise(conclusion, rule)?;
            if *premises[0] != expected {
                return Err(Violation::PremiseMismatch {
                    expected: expected.to_string(),
                });
            }
            Ok(())
        }
    }
}

fn check_wait(
    conclusion: &Sequent,
    premises: &[&Sequent],
    budgets: &Budgets,
) -> Result<(), Violation> {
    match is_stable(conclusion, budgets) {
        Verdict::Valid => {}
        Verdict::Invalid { .. } => return Err(Violation::Unstable),
        Verdict::Unknown => return Err(Violation::UnknownStability),
    }
    let all_vars = conclusion.all_vars();
    for wp in wait_premises(conclusion) {
        match &wp.origin {
            WaitOrigin::SuccedentPick { .. } | WaitOrigin::AntecedentPick { .. } => {
                if !premises.iter().any(|p| **p == wp.sequent) {
                    return Err(Violation::MissingWaitPremise(wp.sequent.to_string()));
                }
            }
            WaitOrigin::SuccedentFresh { path, .. } => {
                let sub = conclusion.succedent.subformula(path).unwrap();
                let (x, body) = match sub {
                    Formula::ChAll(x, a) => (x.clone(), (**a).clone()),
                    _ => unreachable!(),
                };
                let found = premises.iter().any(|p| {
                    p.antecedent == conclusion.antecedent
                        && matches_fresh_at(
                            &conclusion.succedent,
                            &p.succedent,
                            path,
                            &body,
                            &x,
                            &all_vars,
                        )
                });
                if !found {
                    return Err(Violation::MissingWaitPremise(wp.sequent.to_string()));
                }
            }
            WaitOrigin::AntecedentFresh { member, path, .. } => {
                let g = &conclusion.antecedent[*member];
                let sub = g.subformula(path).unwrap();
                let (x, body) = match sub {
                    Formula::ChEx(x, a) => (x.clone(), (**a).clone()),
                    _ => unreachable!(),
                };
                let found = premises.iter().any(|p| {
                    p.succedent == conclusion.succedent
                        && p.antecedent.len() == conclusion.antecedent.len()
                        && p.antecedent
                            .iter()
                            .zip(&conclusion.antecedent)
                            .enumerate()
                            .all(|(i, (pg, cg))| i == *member || pg == cg)
                        && matches_fresh_at(g, &p.antecedent[*member], path, &body, &x, &all_vars)
                });
                if !found {
                    return Err(Violation::MissingWaitPremise(wp.sequent.to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Whether `got` equals `original` with the quantifier occurrence at `path`
/// replaced by `body[x := y]` for some variable `y` not occurring in the
/// conclusion.
fn matches_fresh_at(
    original: &Formula,
    got: &Formula,
    path: &OccurrencePath,
    body: &Formula,
    x: &str,
    conclusion_vars: &BTreeSet<String>,
) -> bool {
    let candidate = match got.subformula(path) {
        Some(c) => c,
        None => return false,
    };
    let y = match match_instance(body, x, candidate) {
        Some(y) => y,
        None => return false,
    };
    if let Some(y) = &y {
        if conclusion_vars.contains(y) {
            return false;
        }
    }
    // the rest of the formula must be untouched
    *got == original.replace_at(path, candidate.clone())
}

/// Checks a whole proof; reports the first failing step.
pub fn check_proof(p: &Proof, budgets: &Budgets) -> Result<(), (usize, Violation)> {
    for (i, step) in p.steps.iter().enumerate() {
        for &j in &step.premises {
            if j >= i {
                return Err((i, Violation::BadPremiseIndex));
            }
        }
        let premises: Vec<&Sequent> = step.premises.iter().map(|&j| &p.steps[j].sequent).collect();
        check_step(&step.sequent, &step.rule, &premises, budgets).map_err(|v| (i, v))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// backward proof search

#[derive(Clone, Debug)]
pub struct ProveBudgets {
    pub depth: usize,
    pub replicate_cap: usize,
    pub classical: Budgets,
}

impl Default for ProveBudgets {
    fn default() -> Self {
        ProveBudgets {
            depth: 40,
            replicate_cap: 2,
            classical: Budgets::default(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProveOutcome {
    Proved(Proof),
    Unprovable,
    Unknown,
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved(_))
    }
    pub fn proof(self) -> Option<Proof> {
        match self {
            ProveOutcome::Proved(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
enum SearchResult {
    Proved(SearchTree),
    Failed,
    Unknown,
}

#[derive(Clone, Debug)]
struct SearchTree {
    sequent: Sequent,
    rule: Rule,
    children: Vec<SearchTree>,
}

/// Fully canonical key for a sequent: antecedent members sorted, bound
/// variables renamed in traversal order and free variables renamed in order
/// of first occurrence. Provability, stability and unprovability are all
/// invariant under member permutation and injective variable renaming, so
/// failure memoization and the stability cache key on this form. Proof trees
/// are never shared across canonical variants — they key on the exact print.
fn canonical_key(s: &Sequent) -> String {
    struct Names {
        bound: BTreeMap<String, Vec<String>>,
        free: BTreeMap<String, String>,
        bound_counter: usize,
    }
    fn term(t: &Term, names: &mut Names, out: &mut String) {
        match t {
            Term::Var(v) => {
                if let Some(stack) = names.bound.get(v) {
                    if let Some(b) = stack.last() {
                        out.push_str(b);
                        return;
                    }
                }
                let next = format!("$f{}", names.free.len());
                let name = names.free.entry(v.clone()).or_insert(next);
                out.push_str(name);
            }
            Term::Const(c) => out.push_str(&format!("{c}")),
            Term::App(f, args) => {
                out.push_str(f);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    term(a, names, out);
                }
                out.push(')');
            }
        }
    }
    fn go(f: &Formula, names: &mut Names, out: &mut String) {
        match f {
            Formula::All(x, a) | Formula::Ex(x, a) | Formula::ChAll(x, a)
            | Formula::ChEx(x, a) => {
                let tag = match f {
                    Formula::All(..) => "A",
                    Formula::Ex(..) => "E",
                    Formula::ChAll(..) => "!",
                    _ => "?",
                };
                let name = format!("$b{}", names.bound_counter);
                names.bound_counter += 1;
                names.bound.entry(x.clone()).or_default().push(name.clone());
                out.push_str(tag);
                out.push_str(&name);
                out.push(':');
                go(a, names, out);
                names.bound.get_mut(x).unwrap().pop();
            }
            Formula::Atom(a) => {
                if !a.positive {
                    out.push('~');
                }
                match &a.pred {
                    crate::syntax::Pred::Eq => out.push('='),
                    crate::syntax::Pred::User(n) => out.push_str(n),
                }
                out.push('(');
                for (i, t) in a.args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    term(t, names, out);
                }
                out.push(')');
            }
            _ => {
                out.push_str(match f {
                    Formula::Top => "T",
                    Formula::Bot => "F",
                    Formula::And(..) => "&&",
                    Formula::Or(..) => "||",
                    Formula::ChAnd(..) => "&",
                    Formula::ChOr(..) => "|",
                    _ => unreachable!(),
                });
                out.push('(');
                for c in f.children() {
                    go(c, names, out);
                    out.push(',');
                }
                out.push(')');
            }
        }
    }
    let mut members: Vec<&Formula> = s.antecedent.iter().collect();
    members.sort_by_key(|g| g.to_string());
    let mut names = Names {
        bound: BTreeMap::new(),
        free: BTreeMap::new(),
        bound_counter: 0,
    };
    let mut out = String::new();
    for (i, g) in members.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        go(g, &mut names, &mut out);
    }
    out.push_str("=>");
    go(&s.succedent, &mut names, &mut out);
    out
}

/// Search statistics, for diagnostics and tuning.
#[derive(Clone, Copy, Default, Debug)]
pub struct ProveStats {
    pub goals: usize,
    pub stability_queries: usize,
    pub memo_hits: usize,
}

struct Prover<'a> {
    budgets: &'a ProveBudgets,
    /// Proof trees keyed by the exact sequent print plus remaining
    /// replication budget.
    proved: BTreeMap<String, SearchTree>,
    /// Canonically-keyed failures; sound across variable renaming and member
    /// permutation.
    failed: BTreeSet<String>,
    stability_cache: BTreeMap<String, Verdict>,
    stats: ProveStats,
}

impl Prover<'_> {
    fn stability(&mut self, s: &Sequent) -> Verdict {
        let key = canonical_key(s);
        if let Some(v) = self.stability_cache.get(&key) {
            return v.clone();
        }
        self.stats.stability_queries += 1;
        let v = is_stable(s, &self.budgets.classical);
        self.stability_cache.insert(key, v.clone());
        v
    }

    fn search(&mut self, goal: &Sequent, depth: usize, replications_left: usize) -> SearchResult {
        if depth == 0 {
            return SearchResult::Unknown;
        }
        self.stats.goals += 1;
        let exact_key = format!("r{replications_left};{goal}");
        if let Some(tree) = self.proved.get(&exact_key) {
            return SearchResult::Proved(tree.clone());
        }
        let canon_key = format!("r{replications_left};{}", canonical_key(goal));
        if self.failed.contains(&canon_key) {
            self.stats.memo_hits += 1;
            return SearchResult::Failed;
        }
        let mut unknown_seen = false;
        // On a stable goal, Wait-decomposition is complete: a stable provable
        // sequent has all its demanded Wait premises provable (otherwise the
        // residual strategy after the corresponding environment move would
        // uniformly win an unprovable sequent). So Choose and Replicate are
        // only explored at unstable goals, where Wait is inapplicable.
        let stability = self.stability(goal);
        match stability {
            Verdict::Valid => {
                let r = self.try_wait(goal, depth, replications_left);
                match &r {
                    SearchResult::Proved(t) => {
                        self.proved.insert(exact_key, t.clone());
                    }
                    SearchResult::Failed => {
                        self.failed.insert(canon_key);
                    }
                    SearchResult::Unknown => {}
                }
                return r;
            }
            Verdict::Invalid { .. } => {}
            Verdict::Unknown => {
                // stability undecided: conservatively try everything
                match self.try_wait(goal, depth, replications_left) {
                    SearchResult::Proved(t) => {
                        self.proved.insert(exact_key, t.clone());
                        return SearchResult::Proved(t);
                    }
                    SearchResult::Unknown => unknown_seen = true,
                    SearchResult::Failed => {}
                }
            }
        }
        // Choose rules, terms drawn from constants, free variables and 0;
        // premises equal up to renaming and member order (e.g. the same
        // instantiation applied to either of two identical copies) are
        // explored once
        let mut tried = BTreeSet::new();
        for rule in choose_options(goal) {
            let premise = match choose_premise(goal, &rule) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if !tried.insert(canonical_key(&premise)) {
                continue;
            }
            match self.search(&premise, depth - 1, replications_left) {
                SearchResult::Proved(t) => {
                    let tree = SearchTree {
                        sequent: goal.clone(),
                        rule,
                        children: vec![t],
                    };
                    self.proved.insert(exact_key, tree.clone());
                    return SearchResult::Proved(tree);
                }
                SearchResult::Unknown => unknown_seen = true,
                SearchResult::Failed => {}
            }
        }
        // Replicate last, bounded by the cap
        if replications_left > 0 {
            let mut seen = BTreeSet::new();
            for member in 0..goal.antecedent.len() {
                // a copy of a choice-free member adds no moves and leaves
                // stability unchanged
                if goal.antecedent[member].is_elementary() {
                    continue;
                }
                if !seen.insert(goal.antecedent[member].clone()) {
                    continue;
                }
                let rule = Rule::Replicate { member };
                let premise = choose_premise(goal, &rule).expect("member index in range");
                match self.search(&premise, depth - 1, replications_left - 1) {
                    SearchResult::Proved(t) => {
                        let tree = SearchTree {
                            sequent: goal.clone(),
                            rule,
                            children: vec![t],
                        };
                        self.proved.insert(exact_key, tree.clone());
                        return SearchResult::Proved(tree);
                    }
                    SearchResult::Unknown => unknown_seen = true,
                    SearchResult::Failed => {}
                }
            }
        }
        if unknown_seen {
            SearchResult::Unknown
        } else {
            self.failed.insert(canon_key);
            SearchResult::Failed
        }
    }

    fn try_wait(&mut self, goal: &Sequent, depth: usize, replications_left: usize) -> SearchResult {
        match self.stability(goal) {
            Verdict::Valid => {}
            Verdict::Invalid { .. } => return SearchResult::Failed,
            Verdict::Unknown => return SearchResult::Unknown,
        }
        let demanded = wait_premises(goal);
        let mut children = Vec::new();
        let mut unknown_seen = false;
        for wp in demanded {
            match self.search(&wp.sequent, depth - 1, replications_left) {
                SearchResult::Proved(t) => children.push(t),
                SearchResult::Unknown => unknown_seen = true,
                // one definitely unprovable demanded premise kills the option
                SearchResult::Failed => return SearchResult::Failed,
            }
        }
        if unknown_seen {
            return SearchResult::Unknown;
        }
        SearchResult::Proved(SearchTree {
            sequent: goal.clone(),
            rule: Rule::Wait,
            children,
        })
    }
}

fn choose_options(goal: &Sequent) -> Vec<Rule> {
    let mut terms: Vec<ChooseTerm> = Vec::new();
    for c in goal.constants() {
        terms.push(ChooseTerm::Const(c));
    }
    for v in goal.free_vars() {
        terms.push(ChooseTerm::Var(v));
    }
    if !goal.constants().contains(&Constant(0)) {
        terms.push(ChooseTerm::Const(Constant(0)));
    }
    let mut out = Vec::new();
    for path in surface_occurrences(&goal.succedent, ChoiceKind::ChOr) {
        for index in 0..2u8 {
            out.push(Rule::ChooseOr {
                path: path.clone(),
                index,
            });
        }
    }
    for (member, g) in goal.antecedent.iter().enumerate() {
        for path in surface_occurrences(g, ChoiceKind::ChAnd) {
            for index in 0..2u8 {
                out.push(Rule::ChooseAnd {
                    member,
                    path: path.clone(),
                    index,
                });
            }
        }
    }
    for path in surface_occurrences(&goal.succedent, ChoiceKind::ChEx) {
        for term in &terms {
            out.push(Rule::ChooseEx {
                path: path.clone(),
                term: term.clone(),
            });
        }
    }
    for (member, g) in goal.antecedent.iter().enumerate() {
        for path in surface_occurrences(g, ChoiceKind::ChAll) {
            for term in &terms {
                out.push(Rule::ChooseAll {
                    member,
                    path: path.clone(),
                    term: term.clone(),
                });
            }
        }
    }
    out
}

/// Linearizes a search tree into a proof, sharing repeated sequents.
fn linearize(tree: &SearchTree) -> Proof {
    fn emit(
        t: &SearchTree,
        steps: &mut Vec<ProofStep>,
        index: &mut BTreeMap<String, usize>,
    ) -> usize {
        let key = t.sequent.to_string();
        if let Some(&i) = index.get(&key) {
            return i;
        }
        let premises: Vec<usize> = t.children.iter().map(|c| emit(c, steps, index)).collect();
        let i = steps.len();
        steps.push(ProofStep {
            sequent: t.sequent.clone(),
            rule: t.rule.clone(),
            premises,
        });
        index.insert(key, i);
        i
    }
    let mut steps = Vec::new();
    emit(tree, &mut steps, &mut BTreeMap::new());
    Proof { steps }
}

/// Bounded backward proof search. `Unprovable` only when the cap-bounded
/// space was exhausted with every stability query decided; `Unknown` when a
/// depth cutoff or an undecided stability blocked the verdict.
pub fn prove(s: &Sequent, budgets: &ProveBudgets) -> ProveOutcome {
    prove_with_stats(s, budgets).0
}

/// [`prove`] plus search statistics. Depths are iteratively deepened: a
/// proof found at a shallow cap is returned before wrong branches get room
/// to grow, while a `Failed` at any cap is already exhaustive (depth
/// cutoffs surface as `Unknown`, never as failure).
pub fn prove_with_stats(s: &Sequent, budgets: &ProveBudgets) -> (ProveOutcome, ProveStats) {
    let mut stats = ProveStats::default();
    let mut depth = 4.min(budgets.depth);
    loop {
        let mut prover = Prover {
            budgets,
            proved: BTreeMap::new(),
            failed: BTreeSet::new(),
            stability_cache: BTreeMap::new(),
            stats: ProveStats::default(),
        };
        let result = prover.search(s, depth, budgets.replicate_cap);
        stats.goals += prover.stats.goals;
        stats.stability_queries += prover.stats.stability_queries;
        stats.memo_hits += prover.stats.memo_hits;
        match result {
            SearchResult::Proved(tree) => return (ProveOutcome::Proved(linearize(&tree)), stats),
            SearchResult::Failed => return (ProveOutcome::Unprovable, stats),
            SearchResult::Unknown => {
                if depth >= budgets.depth {
                    return (ProveOutcome::Unknown, stats);
                }
                depth = (depth + 2).min(budgets.depth);
            }
        }
    }
}

/// Conservativity check over classical logic: on an elementary sequent,
/// provability must agree with classical validity of the elementarization.
/// `None` when either side is undecided.
pub fn conservative_agreement(s: &Sequent, budgets: &ProveBudgets) -> Option<bool> {
    assert!(s.is_elementary());
    let provable = match prove(s, budgets) {
        ProveOutcome::Proved(_) => true,
        ProveOutcome::Unprovable => false,
        ProveOutcome::Unknown => return None,
    };
    let valid = match is_stable(s, &budgets.classical) {
        Verdict::Valid => true,
        Verdict::Invalid { .. } => false,
        Verdict::Unknown => return None,
    };
    Some(provable == valid)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::syntax::parse_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn var(v: &str) -> ChooseTerm {
        ChooseTerm::Var(v.into())
    }

    /// The ten-line cube proof, transcribed verbatim.
    pub fn cube_proof() -> Proof {
        let a = "Ax: (cube(x)=mul(mul(x,x),x))";
        let m = "!x: !y: ?z: (z=mul(x,y))";
        let steps = vec![
            ProofStep {
                sequent: seq(&format!("{a}, t=mul(s,s), r=mul(t,s) => r=cube(s)")),
                rule: Rule::Wait,
                premises: vec![],
            },
            ProofStep {
                sequent: seq(&format!("{a}, t=mul(s,s), r=mul(t,s) => ?y: (y=cube(s))")),
                rule: Rule::ChooseEx {
                    path: vec![],
                    term: var("r"),
                },
                premises: vec![0],
            },
            ProofStep {
                sequent: seq(&format!(
                    "{a}, t=mul(s,s), ?z: (z=mul(t,s)) => ?y: (y=cube(s))"
                )),
                rule: Rule::Wait,
                premises: vec![1],
            },
            ProofStep {
                sequent: seq(&format!(
                    "{a}, t=mul(s,s), !y: ?z: (z=mul(t,y)) => ?y: (y=cube(s))"
                )),
                rule: Rule::ChooseAll {
                    member: 2,
                    path: vec![],
                    term: var("s"),
                },
                premises: vec![2],
            },
            ProofStep {
                sequent: seq(&format!("{a}, t=mul(s,s), {m} => ?y: (y=cube(s))")),
                rule: Rule::ChooseAll {
                    member: 2,
                    path: vec![],
                    term: var("t"),
                },
                premises: vec![3],
            },
            ProofStep {
                sequent: seq(&format!("{a}, ?z: (z=mul(s,s)), {m} => ?y: (y=cube(s))")),
                rule: Rule::Wait,
                premises: vec![4],
            },
            ProofStep {
                sequent: seq(&format!(
                    "{a}, !y: ?z: (z=mul(s,y)), {m} => ?y: (y=cube(s))"
                )),
                rule: Rule::ChooseAll {
                    member: 1,
                    path: vec![],
                    term: var("s"),
                },
                premises: vec![5],
            },
            ProofStep {
                sequent: seq(&format!("{a}, {m}, {m} => ?y: (y=cube(s))")),
                rule: Rule::ChooseAll {
                    member: 1,
                    path: vec![],
                    term: var("s"),
                },
                premises: vec![6],
            },
            ProofStep {
                sequent: seq(&format!("{a}, {m} => ?y: (y=cube(s))")),
                rule: Rule::Replicate { member: 1 },
                premises: vec![7],
            },
            ProofStep {
                sequent: seq(&format!("{a}, {m} => !x: ?y: (y=cube(x))")),
                rule: Rule::Wait,
                premises: vec![8],
            },
        ];
        Proof { steps }
    }

    /// The three-line proof of the quantifier-order formula.
    pub fn quantifier_order_proof() -> Proof {
        let steps = vec![
            ProofStep {
                sequent: seq("=> ~p(s) \\/ p(s)"),
                rule: Rule::Wait,
                premises: vec![],
            },
            ProofStep {
                sequent: seq("=> ?y: (~p(s) \\/ p(y))"),
                rule: Rule::ChooseEx {
                    path: vec![],
                    term: var("s"),
                },
                premises: vec![0],
            },
            ProofStep {
                sequent: seq("=> !x: ?y: (~p(x) \\/ p(y))"),
                rule: Rule::Wait,
                premises: vec![1],
            },
        ];
        Proof { steps }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::{cube_proof, quantifier_order_proof};
    use super::*;
    use crate::syntax::parse_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn var(v: &str) -> ChooseTerm {
        ChooseTerm::Var(v.into())
    }

    #[test]
    fn cube_proof_checks() {
        assert_eq!(check_proof(&cube_proof(), &Budgets::default()), Ok(()));
    }

    #[test]
    fn quantifier_order_proof_checks() {
        assert_eq!(
            check_proof(&quantifier_order_proof(), &Budgets::default()),
            Ok(())
        );
    }

    #[test]
    fn blind_to_choice_proof_checks() {
        let proof = Proof {
            steps: vec![
                ProofStep {
                    sequent: seq("=> Ex: ~p(x) \\/ p(y)"),
                    rule: Rule::Wait,
                    premises: vec![],
                },
                ProofStep {
                    sequent: seq("=> Ex: ~p(x) \\/ !x: p(x)"),
                    rule: Rule::Wait,
                    premises: vec![0],
                },
            ],
        };
        assert_eq!(check_proof(&proof, &Budgets::default()), Ok(()));
    }

    #[test]
    fn corrupted_choose_term_is_rejected() {
        // change the choose term of the second step from r to s: the premise
        // no longer matches
        let mut p = cube_proof();
        p.steps[1].rule = Rule::ChooseEx {
            path: vec![],
            term: var("s"),
        };
        match check_proof(&p, &Budgets::default()) {
            Err((1, Violation::PremiseMismatch { .. })) => {}
            other => panic!("expected mismatch at step 1, got {other:?}"),
        }
    }

    #[test]
    fn wait_from_nothing_needs_stability() {
        let s = seq("=> ?x: ~p(x) \\/ Ax: p(x)");
        assert_eq!(
            check_step(&s, &Rule::Wait, &[], &Budgets::default()),
            Err(Violation::Unstable)
        );
    }

    #[test]
    fn replicate_appends_at_the_end() {
        let c = seq("p & q => (p & q) /\\ (p & q)");
        let good = seq("p & q, p & q => (p & q) /\\ (p & q)");
        assert_eq!(
            check_step(
                &c,
                &Rule::Replicate { member: 0 },
                &[&good],
                &Budgets::default()
            ),
            Ok(())
        );
        let bad = seq("p & q => (p & q) /\\ (p & q)");
        assert!(check_step(
            &c,
            &Rule::Replicate { member: 0 },
            &[&bad],
            &Budgets::default()
        )
        .is_err());
    }

    #[test]
    fn prove_quantifier_order() {
        let good = seq("=> !x: ?y: (p(x) -> p(y))");
        let out = prove(&good, &ProveBudgets::default());
        let proof = out.proof().expect("provable");
        assert_eq!(check_proof(&proof, &Budgets::default()), Ok(()));
        assert_eq!(*proof.conclusion(), good);
        // the reversed quantifier order is unprovable
        let bad = seq("=> ?y: !x: (p(x) -> p(y))");
        assert_eq!(
            prove(&bad, &ProveBudgets::default()),
            ProveOutcome::Unprovable
        );
    }

    #[test]
    fn prove_resource_sensitivity() {
        // the sequent is provable: the antecedent is reusable
        let good = seq("p & q => (p & q) /\\ (p & q)");
        let proof = prove(&good, &ProveBudgets::default())
            .proof()
            .expect("provable");
        assert_eq!(check_proof(&proof, &Budgets::default()), Ok(()));
        assert!(proof.replicate_count() >= 1);
        // the parallel-implication formula is not
        let bad = seq("=> p & q -> (p & q) /\\ (p & q)");
        assert_eq!(
            prove(&bad, &ProveBudgets::default()),
            ProveOutcome::Unprovable
        );
    }

    #[test]
    fn prove_function_choice_is_unprovable() {
        let s = seq("=> !x: ?y: (y=f(x))");
        assert_eq!(
            prove(&s, &ProveBudgets::default()),
            ProveOutcome::Unprovable
        );
    }

    #[test]
    fn blind_choice_direction() {
        let good = seq("=> Ax: p(x) -> !x: p(x)");
        let proof = prove(&good, &ProveBudgets::default())
            .proof()
            .expect("provable");
        assert_eq!(check_proof(&proof, &Budgets::default()), Ok(()));
        let bad = seq("=> !x: p(x) -> Ax: p(x)");
        assert_eq!(
            prove(&bad, &ProveBudgets::default()),
            ProveOutcome::Unprovable
        );
    }

    #[test]
    fn conservativity_spot_checks() {
        let b = ProveBudgets::default();
        assert_eq!(conservative_agreement(&seq("=> p \\/ ~p"), &b), Some(true));
        assert_eq!(conservative_agreement(&seq("p => q"), &b), Some(true));
        assert_eq!(
            conservative_agreement(&seq("Ax: p(x) => p(c)"), &b),
            Some(true)
        );
    }
}
