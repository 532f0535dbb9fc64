//! Classical first-order validity oracle with equality, powering the
//! Stability condition and counterstrategy falsification.
//!
//! Three-valued: validity of elementary first-order logic with function
//! letters and `=` is undecidable, so `Unknown` is a first-class outcome.
//! The pipeline runs an iterative-deepening analytic tableau (equality
//! handled by congruence closure on each branch) interleaved with a finite
//! countermodel search over growing domain sizes. `Valid` is backed by a
//! closed tableau; `Invalid` always carries a machine-checked finite model.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::semantics::{
    eval_truth, FnInterp, Interpretation, Naming, PredInterp, Universe, Valuation,
};
use crate::syntax::{elementarize_sequent, Atom, Constant, Formula, Pred, Sequent, Term};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid,
    /// A finite model and valuation falsifying the query formula.
    Invalid {
        interp: Interpretation,
        valuation: Valuation,
    },
    Unknown,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
    pub fn is_invalid(&self) -> bool {
        matches!(self, Verdict::Invalid { .. })
    }
    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    /// Tableau step budget.
    pub steps: usize,
    /// Largest countermodel domain size tried.
    pub max_domain: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            steps: 100_000,
            max_domain: 3,
        }
    }
}

/// Decides classical validity of an elementary formula. Sound on both sides:
/// `Valid` only with a closed tableau, `Invalid` only with a verified finite
/// countermodel, `Unknown` otherwise. Complete on formulas without blind
/// quantifiers.
pub fn decide_validity(f: &Formula, budgets: &Budgets) -> Verdict {
    assert!(f.is_elementary(), "validity query must be elementary");
    let negated = f.negate();
    let mut steps = budgets.steps;
    // deepening levels: k gamma-rounds at level k, a model search per level
    let max_level = 6usize;
    let mut saturated_open: Option<Branch> = None;
    let mut exhausted = false;
    for level in 1..=max_level {
        match close_tableau(&negated, level, &mut steps) {
            TableauOutcome::Closed => return Verdict::Valid,
            TableauOutcome::Open(branch) => {
                saturated_open = Some(branch);
            }
            TableauOutcome::Deepen => {}
            TableauOutcome::OutOfBudget => {
                exhausted = true;
            }
        }
        if let Some(branch) = &saturated_open {
            // a saturated open branch induces a model over its term classes
            if let Some(verdict) = model_from_branch(f, branch) {
                return verdict;
            }
        }
        let domain = level as u64;
        if domain <= budgets.max_domain {
            if let Some(v) = search_countermodel(f, domain, &mut steps) {
                return v;
            }
        }
        if saturated_open.is_some() || exhausted {
            break;
        }
    }
    // remaining domain sizes if the level loop ended early
    for domain in 1..=budgets.max_domain {
        if let Some(v) = search_countermodel(f, domain, &mut steps) {
            return v;
        }
    }
    Verdict::Unknown
}

/// A sequent is stable iff its elementarization is classically valid.
pub fn is_stable(s: &Sequent, budgets: &Budgets) -> Verdict {
    decide_validity(&elementarize_sequent(s), budgets)
}

// ---------------------------------------------------------------------------
// tableau

enum TableauOutcome {
    Closed,
    /// Saturated with this open branch: the negation is satisfiable.
    Open(Branch),
    /// Open branches remain but more gamma rounds might close them.
    Deepen,
    OutOfBudget,
}

#[derive(Clone, Debug)]
struct Branch {
    /// Unprocessed formulas.
    queue: Vec<Formula>,
    /// Processed literals.
    literals: Vec<Atom>,
    /// Universal formulas awaiting instantiation.
    universals: Vec<(String, Formula)>,
    /// (universal index, term) pairs already instantiated.
    done: BTreeSet<(usize, Term)>,
    /// Ground terms available for instantiation.
    terms: BTreeSet<Term>,
    gamma_rounds: usize,
    next_skolem: usize,
}

fn ground_subterms(t: &Term, bound: &BTreeSet<String>, out: &mut BTreeSet<Term>) {
    let mut vars = BTreeSet::new();
    collect_term_vars(t, &mut vars);
    if vars.is_disjoint(bound) {
        out.insert(t.clone());
    }
    if let Term::App(_, args) = t {
        for a in args {
            ground_subterms(a, bound, out);
        }
    }
}

fn collect_term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Const(_) => {}
        Term::App(_, args) => {
            for a in args {
                collect_term_vars(a, out);
            }
        }
    }
}

fn formula_ground_terms(f: &Formula, bound: &mut BTreeSet<String>, out: &mut BTreeSet<Term>) {
    match f {
        Formula::Atom(a) => {
            for t in &a.args {
                ground_subterms(t, bound, out);
            }
        }
        Formula::All(x, a) | Formula::Ex(x, a) => {
            let fresh = bound.insert(x.clone());
            formula_ground_terms(a, bound, out);
            if fresh {
                bound.remove(x);
            }
        }
        _ => {
            for c in f.children() {
                formula_ground_terms(c, bound, out);
            }
        }
    }
}

fn close_tableau(negated: &Formula, level: usize, steps: &mut usize) -> TableauOutcome {
    let mut initial_terms = BTreeSet::new();
    formula_ground_terms(negated, &mut BTreeSet::new(), &mut initial_terms);
    // stratify instantiation: at deepening level k, at most k gamma rounds
    // drawing from at most `term_cap` terms, cheapest first (the Ord on Term
    // puts variables and constants before applications)
    let term_cap = 8 + 8 * level;
    let root = Branch {
        queue: vec![negated.clone()],
        literals: Vec::new(),
        universals: Vec::new(),
        done: BTreeSet::new(),
        terms: initial_terms,
        gamma_rounds: 0,
        next_skolem: 0,
    };
    let mut stack = vec![root];
    let mut deepen = false;
    while let Some(mut branch) = stack.pop() {
        loop {
            if *steps == 0 {
                return TableauOutcome::OutOfBudget;
            }
            *steps -= 1;
            if let Some(f) = branch.queue.pop() {
                match f {
                    Formula::Top => {}
                    Formula::Bot => break,
                    Formula::Atom(a) => {
                        for t in &a.args {
                            ground_subterms(t, &BTreeSet::new(), &mut branch.terms);
                        }
                        branch.literals.push(a);
                        // closure checks rebuild the congruence; charge them
                        *steps = steps.saturating_sub(branch.literals.len());
                        if branch_closed(&branch.literals) {
                            break;
                        }
                    }
                    Formula::And(a, b) => {
                        branch.queue.push(*a);
                        branch.queue.push(*b);
                    }
                    Formula::Or(a, b) => {
                        let mut other = branch.clone();
                        other.queue.push(*a);
                        stack.push(other);
                        branch.queue.push(*b);
                    }
                    Formula::Ex(x, a) => {
                        let sk = Term::App(format!("$sk{}", branch.next_skolem), vec![]);
                        branch.next_skolem += 1;
                        branch.terms.insert(sk.clone());
                        let mut m = BTreeMap::new();
                        m.insert(x.clone(), sk);
                        branch.queue.push(subst_term(&a, &m));
                    }
                    Formula::All(x, a) => {
                        branch.universals.push((x, *a));
                    }
                    Formula::ChAnd(..)
                    | Formula::ChOr(..)
                    | Formula::ChAll(..)
                    | Formula::ChEx(..) => {
                        unreachable!("tableau input is elementary")
                    }
                }
                continue;
            }
            // queue exhausted: gamma round
            if branch.universals.is_empty() {
                return TableauOutcome::Open(branch);
            }
            if branch.gamma_rounds >= level {
                deepen = true;
                break;
            }
            branch.gamma_rounds += 1;
            if branch.terms.is_empty() {
                // gamma needs at least one parameter
                branch.terms.insert(Term::App("$sk_init".to_owned(), vec![]));
            }
            let capped = branch.terms.len() > term_cap;
            let terms: Vec<Term> = branch.terms.iter().take(term_cap).cloned().collect();
            let mut progressed = false;
            for (i, (x, body)) in branch.universals.clone().into_iter().enumerate() {
                for t in &terms {
                    if branch.done.insert((i, t.clone())) {
                        let mut m = BTreeMap::new();
                        m.insert(x.clone(), t.clone());
                        branch.queue.push(subst_term(&body, &m));
                        progressed = true;
                    }
                }
            }
            if !progressed {
                if capped {
                    // terms beyond the cap were never tried
                    deepen = true;
                    break;
                }
                // every universal instantiated with every known term
                return TableauOutcome::Open(branch);
            }
        }
    }
    if deepen {
        TableauOutcome::Deepen
    } else {
        TableauOutcome::Closed
    }
}

/// Substitution by arbitrary terms (tableau internal; replacement terms are
/// ground so capture is impossible).
fn subst_term(f: &Formula, map: &BTreeMap<String, Term>) -> Formula {
    match f {
        Formula::Top | Formula::Bot => f.clone(),
        Formula::Atom(a) => Formula::Atom(Atom {
            positive: a.positive,
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| subst_into(t, map)).collect(),
        }),
        Formula::And(a, b) => Formula::And(
            alloc::boxed::Box::new(subst_term(a, map)),
            alloc::boxed::Box::new(subst_term(b, map)),
        ),
        Formula::Or(a, b) => Formula::Or(
            alloc::boxed::Box::new(subst_term(a, map)),
            alloc::boxed::Box::new(subst_term(b, map)),
        ),
        Formula::All(x, a) | Formula::Ex(x, a) => {
            let mut inner = map.clone();
            inner.remove(x);
            let body = alloc::boxed::Box::new(subst_term(a, &inner));
            if matches!(f, Formula::All(..)) {
                Formula::All(x.clone(), body)
            } else {
                Formula::Ex(x.clone(), body)
            }
        }
        _ => unreachable!("tableau formulas are elementary"),
    }
}

fn subst_into(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| subst_into(a, map)).collect())
        }
    }
}

// ---------------------------------------------------------------------------
// congruence closure

struct Congruence {
    terms: Vec<Term>,
    index: BTreeMap<Term, usize>,
    parent: Vec<usize>,
    /// Decomposed applications: (interned head, argument term ids).
    apps: Vec<Option<(usize, Vec<usize>)>>,
    heads: BTreeMap<String, usize>,
}

impl Congruence {
    fn new() -> Congruence {
        Congruence {
            terms: Vec::new(),
            index: BTreeMap::new(),
            parent: Vec::new(),
            apps: Vec::new(),
            heads: BTreeMap::new(),
        }
    }

    fn add(&mut self, t: &Term) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        let app = if let Term::App(f, args) = t {
            let arg_ids: Vec<usize> = args.iter().map(|a| self.add(a)).collect();
            let next = self.heads.len();
            let head = *self.heads.entry(f.clone()).or_insert(next);
            Some((head, arg_ids))
        } else {
            None
        };
        let i = self.terms.len();
        self.terms.push(t.clone());
        self.index.insert(t.clone(), i);
        self.parent.push(i);
        self.apps.push(app);
        i
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    /// Propagates congruence to fixpoint: equal arguments under the same
    /// head force equal applications. Each pass works on a root snapshot so
    /// the pair scan stays allocation-free.
    fn saturate(&mut self) {
        let n = self.terms.len();
        let app_ids: Vec<usize> = (0..n).filter(|&i| self.apps[i].is_some()).collect();
        loop {
            let mut roots = vec![0usize; n];
            for (i, r) in roots.iter_mut().enumerate() {
                *r = self.find(i);
            }
            let mut unions: Vec<(usize, usize)> = Vec::new();
            for (k, &i) in app_ids.iter().enumerate() {
                let (hi, ai) = self.apps[i].as_ref().unwrap();
                for &j in app_ids.iter().skip(k + 1) {
                    if roots[i] == roots[j] {
                        continue;
                    }
                    let (hj, aj) = self.apps[j].as_ref().unwrap();
                    if hi == hj
                        && ai.len() == aj.len()
                        && ai.iter().zip(aj).all(|(&x, &y)| roots[x] == roots[y])
                    {
                        unions.push((i, j));
                    }
                }
            }
            if unions.is_empty() {
                return;
            }
            for (i, j) in unions {
                self.union(i, j);
            }
        }
    }

    fn equal(&mut self, a: &Term, b: &Term) -> bool {
        match (self.index.get(a).copied(), self.index.get(b).copied()) {
            (Some(i), Some(j)) => self.find(i) == self.find(j),
            _ => a == b,
        }
    }
}

fn branch_closed(literals: &[Atom]) -> bool {
    let mut cc = Congruence::new();
    for a in literals {
        for t in &a.args {
            cc.add(t);
        }
    }
    for a in literals {
        if a.positive && a.pred == Pred::Eq {
            let (i, j) = (cc.index[&a.args[0]], cc.index[&a.args[1]]);
            cc.union(i, j);
        }
    }
    cc.saturate();
    // a disequality between congruent terms closes the branch
    for a in literals {
        if !a.positive && a.pred == Pred::Eq && cc.equal(&a.args[0], &a.args[1]) {
            return true;
        }
    }
    // complementary literals modulo congruence close the branch
    for (i, a) in literals.iter().enumerate() {
        if a.pred == Pred::Eq {
            continue;
        }
        for b in literals.iter().skip(i + 1) {
            if a.pred == b.pred && a.positive != b.positive && a.args.len() == b.args.len() {
                let all_eq = a.args.iter().zip(&b.args).all(|(x, y)| cc.equal(x, y));
                if all_eq {
                    return true;
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// model extraction and countermodel search

struct Signature {
    constants: BTreeSet<Constant>,
    functions: BTreeMap<String, usize>,
    predicates: BTreeMap<String, usize>,
    free_vars: Vec<String>,
}

fn signature_of(f: &Formula) -> Signature {
    fn term_sig(t: &Term, sig: &mut Signature) {
        match t {
            Term::Var(_) => {}
            Term::Const(c) => {
                sig.constants.insert(*c);
            }
            Term::App(name, args) => {
                sig.functions.insert(name.clone(), args.len());
                for a in args {
                    term_sig(a, sig);
                }
            }
        }
    }
    fn go(f: &Formula, sig: &mut Signature) {
        if let Formula::Atom(a) = f {
            if let Pred::User(name) = &a.pred {
                sig.predicates.insert(name.clone(), a.args.len());
            }
            for t in &a.args {
                term_sig(t, sig);
            }
        }
        for c in f.children() {
            go(c, sig);
        }
    }
    let mut sig = Signature {
        constants: BTreeSet::new(),
        functions: BTreeMap::new(),
        predicates: BTreeMap::new(),
        free_vars: f.free_vars(),
    };
    go(f, &mut sig);
    sig
}

/// Builds a model from a saturated open branch: the domain is the set of
/// congruence classes of the branch's ground terms. Returns `Some(Invalid)`
/// only when the extracted model verifiably falsifies `f`.
fn model_from_branch(f: &Formula, branch: &Branch) -> Option<Verdict> {
    let sig = signature_of(f);
    let mut cc = Congruence::new();
    for t in &branch.terms {
        cc.add(t);
    }
    for a in &branch.literals {
        for t in &a.args {
            cc.add(t);
        }
    }
    for a in &branch.literals {
        if a.positive && a.pred == Pred::Eq {
            let (i, j) = (cc.index[&a.args[0]], cc.index[&a.args[1]]);
            cc.union(i, j);
        }
    }
    cc.saturate();
    // congruence classes become contiguous element indices
    let n = cc.terms.len();
    let mut class_of = vec![0u64; n];
    let mut reps: BTreeMap<usize, u64> = BTreeMap::new();
    for i in 0..n {
        let root = cc.find(i);
        let next = reps.len() as u64;
        let e = *reps.entry(root).or_insert(next);
        class_of[i] = e;
    }
    let range = reps.len().max(1) as u64;
    let mut naming = BTreeMap::new();
    for c in &sig.constants {
        let e = cc
            .index
            .get(&Term::Const(*c))
            .copied()
            .map(|i| class_of[cc.find(i)])
            .unwrap_or(0);
        naming.insert(*c, e);
    }
    let mut functions = BTreeMap::new();
    for (name, &arity) in &sig.functions {
        let mut table = BTreeMap::new();
        for tuple in tuples(range, arity) {
            table.insert(tuple, 0u64);
        }
        // overwrite defaults with the classes the branch dictates
        for (i, t) in cc.terms.clone().iter().enumerate() {
            if let Term::App(g, args) = t {
                if g == name {
                    let tuple: Vec<u64> = args
                        .iter()
                        .map(|a| {
                            let j = cc.index[a];
                            class_of[cc.find(j)]
                        })
                        .collect();
                    table.insert(tuple, class_of[cc.find(i)]);
                }
            }
        }
        functions.insert(name.clone(), FnInterp::Table(table));
    }
    let mut predicates = BTreeMap::new();
    for name in sig.predicates.keys() {
        let mut set = BTreeSet::new();
        for a in &branch.literals {
            if a.positive && a.pred == Pred::User(name.clone()) {
                let tuple: Vec<u64> = a
                    .args
                    .iter()
                    .map(|t| {
                        let j = cc.index[t];
                        class_of[cc.find(j)]
                    })
                    .collect();
                set.insert(tuple);
            }
        }
        predicates.insert(name.clone(), PredInterp::Table(set));
    }
    let interp = Interpretation {
        universe: Universe {
            range,
            naming: Naming::Table(naming),
        },
        functions,
        predicates,
    };
    let mut valuation = Valuation::new();
    for v in &sig.free_vars {
        let e = cc
            .index
            .get(&Term::Var(v.clone()))
            .copied()
            .map(|i| class_of[cc.find(i)])
            .unwrap_or(0);
        valuation.insert(v.clone(), e);
    }
    // the certificate must check out
    match eval_truth(f, &interp, &mut valuation.clone()) {
        Ok(false) => Some(Verdict::Invalid { interp, valuation }),
        _ => None,
    }
}

fn tuples(range: u64, arity: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            for e in 0..range {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Exhaustive countermodel search over a fixed domain size. Deterministic;
/// cost is charged against the shared step budget up front and the search is
/// skipped when it would not fit.
fn search_countermodel(f: &Formula, domain: u64, steps: &mut usize) -> Option<Verdict> {
    let sig = signature_of(f);
    let mut fn_cells: Vec<(String, Vec<u64>)> = Vec::new();
    for (name, &arity) in &sig.functions {
        for t in tuples(domain, arity) {
            fn_cells.push((name.clone(), t));
        }
    }
    let mut pred_cells: Vec<(String, Vec<u64>)> = Vec::new();
    for (name, &arity) in &sig.predicates {
        for t in tuples(domain, arity) {
            pred_cells.push((name.clone(), t));
        }
    }
    let consts: Vec<Constant> = sig.constants.iter().copied().collect();
    let n_domain_cells = (consts.len() + fn_cells.len() + sig.free_vars.len()) as u32;
    let total = (domain as u128)
        .checked_pow(n_domain_cells)
        .and_then(|x| x.checked_mul((2u128).checked_pow(pred_cells.len() as u32)?));
    let total = match total {
        Some(t) if t <= *steps as u128 => t as usize,
        _ => return None,
    };
    *steps -= total;

    let mut odometer = vec![0u64; consts.len() + fn_cells.len() + sig.free_vars.len()];
    let mut pred_bits = vec![false; pred_cells.len()];
    loop {
        let mut naming = BTreeMap::new();
        for (i, c) in consts.iter().enumerate() {
            naming.insert(*c, odometer[i]);
        }
        let mut functions: BTreeMap<String, FnInterp> = BTreeMap::new();
        for (i, (name, tuple)) in fn_cells.iter().enumerate() {
            let v = odometer[consts.len() + i];
            match functions
                .entry(name.clone())
                .or_insert_with(|| FnInterp::Table(BTreeMap::new()))
            {
                FnInterp::Table(t) => {
                    t.insert(tuple.clone(), v);
                }
                FnInterp::Builtin(_) => unreachable!(),
            }
        }
        let mut predicates: BTreeMap<String, PredInterp> = BTreeMap::new();
        for name in sig.predicates.keys() {
            predicates.insert(name.clone(), PredInterp::Table(BTreeSet::new()));
        }
        for (i, (name, tuple)) in pred_cells.iter().enumerate() {
            if pred_bits[i] {
                match predicates.get_mut(name).unwrap() {
                    PredInterp::Table(s) => {
                        s.insert(tuple.clone());
                    }
                    PredInterp::Builtin(_) => unreachable!(),
                }
            }
        }
        let mut valuation = Valuation::new();
        for (i, v) in sig.free_vars.iter().enumerate() {
            valuation.insert(v.clone(), odometer[consts.len() + fn_cells.len() + i]);
        }
        let interp = Interpretation {
            universe: Universe {
                range: domain,
                naming: Naming::Table(naming),
            },
            functions,
            predicates,
        };
        if let Ok(false) = eval_truth(f, &interp, &mut valuation.clone()) {
            return Some(Verdict::Invalid { interp, valuation });
        }
        // advance the odometer
        let mut carried = true;
        for d in odometer.iter_mut() {
            *d += 1;
            if *d < domain {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            let mut bit_carried = true;
            for b in pred_bits.iter_mut() {
                *b = !*b;
                if *b {
                    bit_carried = false;
                    break;
                }
            }
            if bit_carried {
                return None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};

    fn valid(s: &str) -> bool {
        decide_validity(&parse_formula(s).unwrap(), &Budgets::default()).is_valid()
    }

    fn check_invalid(s: &str) -> (Interpretation, Valuation) {
        let f = parse_formula(s).unwrap();
        match decide_validity(&f, &Budgets::default()) {
            Verdict::Invalid { interp, valuation } => {
                // machine-checked certificate
                assert_eq!(
                    eval_truth(&f, &interp, &mut valuation.clone()),
                    Ok(false),
                    "countermodel fails to falsify {s}"
                );
                (interp, valuation)
            }
            v => panic!("expected Invalid for {s}, got {v:?}"),
        }
    }

    #[test]
    fn propositional_fragment_is_complete() {
        assert!(valid("p \\/ ~p"));
        assert!(valid("p /\\ q -> q /\\ p"));
        check_invalid("p -> q");
        check_invalid("p \\/ q");
        for s in ["p", "~p", "p -> p", "(p -> q) -> ((q -> r) -> (p -> r))"] {
            let v = decide_validity(&parse_formula(s).unwrap(), &Budgets::default());
            assert!(!v.is_unknown(), "unknown on propositional {s}");
        }
    }

    #[test]
    fn equality_is_identity() {
        assert!(valid("x=x"));
        assert!(valid("x=y -> (p(x) -> p(y))"));
        assert!(valid("x=y -> y=x"));
        assert!(valid("x=y /\\ y=z -> x=z"));
        // distinct numerals may still name the same element
        check_invalid("~(0=1)");
    }

    #[test]
    fn top_consequent_is_valid() {
        assert!(valid("Ax: p(x) -> T"));
    }

    #[test]
    fn unstable_disjunction_has_domain_one_countermodel() {
        // elementarization of the choose-too-early counterexample
        let (interp, _) = check_invalid("F \\/ Ax: p(x)");
        assert_eq!(interp.universe.range, 1);
        match interp.predicates.get("p") {
            Some(PredInterp::Table(s)) => assert!(s.is_empty()),
            _ => panic!("expected an empty table for p"),
        }
    }

    #[test]
    fn cube_line_one_is_valid() {
        // needs universal instantiation plus congruence closure
        assert!(valid(
            "Ax: (cube(x)=mul(mul(x,x),x)) /\\ t=mul(s,s) /\\ r=mul(t,s) -> r=cube(s)"
        ));
    }

    #[test]
    fn universal_to_instance_is_valid() {
        assert!(valid("Ax: p(x) -> p(y)"));
        assert!(valid("Ex: ~p(x) \\/ p(y)"));
    }

    #[test]
    fn function_graph_formulas() {
        check_invalid("x=f(x)");
        check_invalid("0=f(x)");
        assert!(valid("f(x)=f(x)"));
    }

    #[test]
    fn stability_examples() {
        let b = Budgets::default();
        // stable: waiting is justified on the universal side
        let s = parse_sequent("=> Ax: p(x) -> !x: p(x)").unwrap();
        assert!(is_stable(&s, &b).is_valid());
        // unstable: the elementarization forfeits the choice disjunct
        let s = parse_sequent("=> !x: p(x) -> Ax: p(x)").unwrap();
        assert!(is_stable(&s, &b).is_invalid());
        let s = parse_sequent("=> T").unwrap();
        assert!(is_stable(&s, &b).is_valid());
        // line 1 of the cube proof is stable
        let s =
            parse_sequent("Ax: (cube(x)=mul(mul(x,x),x)), t=mul(s,s), r=mul(t,s) => r=cube(s)")
                .unwrap();
        assert!(is_stable(&s, &b).is_valid());
    }

    #[test]
    fn verdicts_are_stable_under_budget_increase() {
        let f = parse_formula("Ax: p(x) -> p(y)").unwrap();
        let small = decide_validity(
            &f,
            &Budgets {
                steps: 10_000,
                max_domain: 2,
            },
        );
        let big = decide_validity(
            &f,
            &Budgets {
                steps: 200_000,
                max_domain: 3,
            },
        );
        assert_eq!(small.is_valid(), big.is_valid());
        let g = parse_formula("p(x) -> p(y)").unwrap();
        let small = decide_validity(
            &g,
            &Budgets {
                steps: 10_000,
                max_domain: 2,
            },
        );
        let big = decide_validity(
            &g,
            &Budgets {
                steps: 200_000,
                max_domain: 3,
            },
        );
        assert!(small.is_invalid() && big.is_invalid());
    }
}
