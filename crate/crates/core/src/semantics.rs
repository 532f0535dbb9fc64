//! Game semantics: positions of the closure of a formula, sequent or
//! recurrence tree under play, legal-move checking, run application, win
//! evaluation over finite interpretations, run projections, the delay
//! relation and a brute-force winnability oracle.
//!
//! Move strings are bit-exact per the move grammar: closure move `#c`;
//! sequent prefix `1.` (succedent) or `0.i.` (antecedent member i, zero-based
//! decimal); inside a recurrence tree `u.rest` (`u` a bit string, possibly
//! empty) or replicative `:w`; inside formulas a parallel prefix `j.` per
//! binary connective child, choice moves `0`/`1` and quantifier choices `#c`.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{
    elementarize, substitute_const, surface_occurrences, Atom, ChoiceKind, Constant, Formula,
    Pred, Sequent, Term,
};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Player {
    /// Machine, the top player.
    Machine,
    /// Environment, the bottom player.
    Environment,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Machine => Player::Environment,
            Player::Environment => Player::Machine,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Machine => "T",
            Player::Environment => "B",
        })
    }
}

/// A labeled move: the moving player and the raw move string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabMove {
    pub player: Player,
    pub text: String,
}

impl LabMove {
    pub fn new(player: Player, text: impl Into<String>) -> LabMove {
        LabMove {
            player,
            text: text.into(),
        }
    }
}

impl fmt::Display for LabMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.player, self.text)
    }
}

pub type Run = Vec<LabMove>;

// ---------------------------------------------------------------------------
// interpretations

/// Universe of discourse: elements are natural numbers; `range` is the
/// declared finite prefix over which blind quantifiers are evaluated and from
/// which table functions are total. Function values may exceed the range (the
/// ideal universe is infinite); arithmetic past the 64-bit boundary is an
/// evaluation error, never a wraparound.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Universe {
    pub range: u64,
    pub naming: Naming,
}

/// Constant-to-element naming. `Ideal` maps every numeral to itself; a table
/// is total on its declared pool only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Naming {
    Ideal,
    Table(BTreeMap<Constant, u64>),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FnBuiltin {
    Successor,
    Add,
    Mul,
    Cube,
}

impl FnBuiltin {
    pub fn arity(self) -> usize {
        match self {
            FnBuiltin::Successor | FnBuiltin::Cube => 1,
            FnBuiltin::Add | FnBuiltin::Mul => 2,
        }
    }

    pub fn eval(self, args: &[u64]) -> Option<u64> {
        match self {
            FnBuiltin::Successor => args[0].checked_add(1),
            FnBuiltin::Add => args[0].checked_add(args[1]),
            FnBuiltin::Mul => args[0].checked_mul(args[1]),
            FnBuiltin::Cube => args[0]
                .checked_mul(args[0])
                .and_then(|s| s.checked_mul(args[0])),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PredBuiltin {
    Even,
    Odd,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FnInterp {
    Builtin(FnBuiltin),
    Table(BTreeMap<Vec<u64>, u64>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PredInterp {
    Builtin(PredBuiltin),
    Table(BTreeSet<Vec<u64>>),
}

/// A finite interpretation: a universe plus tables or builtins for the
/// function and predicate letters. Equality is always element identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Interpretation {
    pub universe: Universe,
    pub functions: BTreeMap<String, FnInterp>,
    pub predicates: BTreeMap<String, PredInterp>,
}

impl Interpretation {
    /// The ideal-prefix interpretation with the standard arithmetic builtins.
    pub fn standard(range: u64) -> Interpretation {
        let mut functions = BTreeMap::new();
        functions.insert("succ".to_owned(), FnInterp::Builtin(FnBuiltin::Successor));
        functions.insert("add".to_owned(), FnInterp::Builtin(FnBuiltin::Add));
        functions.insert("mul".to_owned(), FnInterp::Builtin(FnBuiltin::Mul));
        functions.insert("cube".to_owned(), FnInterp::Builtin(FnBuiltin::Cube));
        let mut predicates = BTreeMap::new();
        predicates.insert("even".to_owned(), PredInterp::Builtin(PredBuiltin::Even));
        predicates.insert("odd".to_owned(), PredInterp::Builtin(PredBuiltin::Odd));
        Interpretation {
            universe: Universe {
                range,
                naming: Naming::Ideal,
            },
            functions,
            predicates,
        }
    }
}

/// A variable-to-element mapping.
pub type Valuation = BTreeMap<String, u64>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    UnnamedConstant(Constant),
    UnknownFunction(String),
    UnknownPredicate(String),
    MissingTableEntry(String),
    ArithmeticOverflow,
    FreeVariable(String),
    ChoiceOperator,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnnamedConstant(c) => write!(f, "constant {c} has no name in the universe"),
            EvalError::UnknownFunction(s) => write!(f, "no interpretation for function {s}"),
            EvalError::UnknownPredicate(s) => write!(f, "no interpretation for predicate {s}"),
            EvalError::MissingTableEntry(s) => write!(f, "table for {s} is not total"),
            EvalError::ArithmeticOverflow => f.write_str("arithmetic overflow"),
            EvalError::FreeVariable(v) => write!(f, "unvalued free variable {v}"),
            EvalError::ChoiceOperator => f.write_str("choice operator in truth evaluation"),
        }
    }
}

pub fn eval_term(t: &Term, interp: &Interpretation, val: &Valuation) -> Result<u64, EvalError> {
    match t {
        Term::Var(v) => val
            .get(v)
            .copied()
            .ok_or_else(|| EvalError::FreeVariable(v.clone())),
        Term::Const(c) => match &interp.universe.naming {
            Naming::Ideal => Ok(c.0),
            Naming::Table(tbl) => tbl.get(c).copied().ok_or(EvalError::UnnamedConstant(*c)),
        },
        Term::App(name, args) => {
            let vals: Vec<u64> = args
                .iter()
                .map(|a| eval_term(a, interp, val))
                .collect::<Result<_, _>>()?;
            match interp.functions.get(name) {
                Some(FnInterp::Builtin(b)) => b.eval(&vals).ok_or(EvalError::ArithmeticOverflow),
                Some(FnInterp::Table(tbl)) => tbl
                    .get(&vals)
                    .copied()
                    .ok_or_else(|| EvalError::MissingTableEntry(name.clone())),
                None => Err(EvalError::UnknownFunction(name.clone())),
            }
        }
    }
}

fn eval_atom(a: &Atom, interp: &Interpretation, val: &Valuation) -> Result<bool, EvalError> {
    let vals: Vec<u64> = a
        .args
        .iter()
        .map(|t| eval_term(t, interp, val))
        .collect::<Result<_, _>>()?;
    let v = match &a.pred {
        Pred::Eq => vals[0] == vals[1],
        Pred::User(name) => match interp.predicates.get(name) {
            Some(PredInterp::Builtin(PredBuiltin::Even)) => vals[0] % 2 == 0,
            Some(PredInterp::Builtin(PredBuiltin::Odd)) => vals[0] % 2 == 1,
            Some(PredInterp::Table(tbl)) => tbl.contains(&vals),
            None => return Err(EvalError::UnknownPredicate(name.clone())),
        },
    };
    Ok(if a.positive { v } else { !v })
}

/// Classical truth of an elementary formula; blind quantifiers range over the
/// declared universe prefix.
pub fn eval_truth(
    f: &Formula,
    interp: &Interpretation,
    val: &mut Valuation,
) -> Result<bool, EvalError> {
    match f {
        Formula::Top => Ok(true),
        Formula::Bot => Ok(false),
        Formula::Atom(a) => eval_atom(a, interp, val),
        Formula::And(a, b) => Ok(eval_truth(a, interp, val)? && eval_truth(b, interp, val)?),
        Formula::Or(a, b) => Ok(eval_truth(a, interp, val)? || eval_truth(b, interp, val)?),
        Formula::All(x, a) => {
            let saved = val.get(x).copied();
            let mut result = true;
            for e in 0..interp.universe.range {
                val.insert(x.clone(), e);
                if !eval_truth(a, interp, val)? {
                    result = false;
                    break;
                }
            }
            restore(val, x, saved);
            Ok(result)
        }
        Formula::Ex(x, a) => {
            let saved = val.get(x).copied();
            let mut result = false;
            for e in 0..interp.universe.range {
                val.insert(x.clone(), e);
                if eval_truth(a, interp, val)? {
                    result = true;
                    break;
                }
            }
            restore(val, x, saved);
            Ok(result)
        }
        Formula::ChAnd(..) | Formula::ChOr(..) | Formula::ChAll(..) | Formula::ChEx(..) => {
            Err(EvalError::ChoiceOperator)
        }
    }
}

fn restore(val: &mut Valuation, x: &str, saved: Option<u64>) {
    match saved {
        Some(v) => {
            val.insert(x.to_owned(), v);
        }
        None => {
            val.remove(x);
        }
    }
}

// ---------------------------------------------------------------------------
// move grammar

/// A bit-string address inside a recurrence tree: characters `0`/`1`.
pub type TreeAddr = String;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FormulaAct {
    /// Resolve a surface choice conjunction or disjunction (move `0`/`1`).
    Pick(u8),
    /// Resolve a surface choice quantifier (move `#c`).
    Choose(Constant),
}

/// A move inside a formula: parallel-connective child indices, then an act.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormulaMove {
    pub path: Vec<u8>,
    pub act: FormulaAct,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreeMove {
    /// `:w` — fork the leaf addressed by `w`.
    Replicate(TreeAddr),
    /// `u.rest` — apply `rest` to every leaf whose address extends `u`.
    At(TreeAddr, FormulaMove),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Move {
    /// `#c` during the closure phase.
    Closure(Constant),
    /// Move in a bare formula game.
    InFormula(FormulaMove),
    /// `1.rest` — move in the succedent of a sequent.
    Succedent(FormulaMove),
    /// `0.i.rest` — move in antecedent member `i`.
    Antecedent(usize, TreeMove),
    /// Move in a bare recurrence game.
    InTree(TreeMove),
}

pub fn parse_formula_move(s: &str) -> Option<FormulaMove> {
    let mut path = Vec::new();
    let mut rest = s;
    loop {
        if let Some(tail) = rest.strip_prefix("0.") {
            path.push(0);
            rest = tail;
        } else if let Some(tail) = rest.strip_prefix("1.") {
            path.push(1);
            rest = tail;
        } else {
            break;
        }
    }
    let act = if let Some(num) = rest.strip_prefix('#') {
        FormulaAct::Choose(Constant::parse_numeral(num)?)
    } else {
        match rest {
            "0" => FormulaAct::Pick(0),
            "1" => FormulaAct::Pick(1),
            _ => return None,
        }
    };
    Some(FormulaMove { path, act })
}

pub fn parse_tree_move(s: &str) -> Option<TreeMove> {
    if let Some(w) = s.strip_prefix(':') {
        if w.bytes().all(|b| b == b'0' || b == b'1') {
            return Some(TreeMove::Replicate(w.to_owned()));
        }
        return None;
    }
    let dot = s.find('.')?;
    let (u, rest) = (&s[..dot], &s[dot + 1..]);
    if !u.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    Some(TreeMove::At(u.to_owned(), parse_formula_move(rest)?))
}

pub fn format_formula_move(fm: &FormulaMove) -> String {
    let mut s = String::new();
    for i in &fm.path {
        s.push(if *i == 0 { '0' } else { '1' });
        s.push('.');
    }
    match &fm.act {
        FormulaAct::Pick(i) => s.push(if *i == 0 { '0' } else { '1' }),
        FormulaAct::Choose(c) => s.push_str(&format!("#{c}")),
    }
    s
}

pub fn format_tree_move(tm: &TreeMove) -> String {
    match tm {
        TreeMove::Replicate(w) => format!(":{w}"),
        TreeMove::At(u, fm) => format!("{u}.{}", format_formula_move(fm)),
    }
}

impl Move {
    /// Renders the move in the concrete grammar.
    pub fn format(&self) -> String {
        match self {
            Move::Closure(c) => format!("#{c}"),
            Move::InFormula(fm) => format_formula_move(fm),
            Move::Succedent(fm) => format!("1.{}", format_formula_move(fm)),
            Move::Antecedent(i, tm) => format!("0.{i}.{}", format_tree_move(tm)),
            Move::InTree(tm) => format_tree_move(tm),
        }
    }
}

// ---------------------------------------------------------------------------
// game states

/// A tree of formula remainders; leaf addresses are the paths from the root,
/// `0` = left, `1` = right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum CopyTree {
    Leaf(Formula),
    Fork(Box<CopyTree>, Box<CopyTree>),
}

impl CopyTree {
    pub fn leaves(&self) -> Vec<(TreeAddr, &Formula)> {
        fn go<'a>(t: &'a CopyTree, addr: &mut String, out: &mut Vec<(TreeAddr, &'a Formula)>) {
            match t {
                CopyTree::Leaf(f) => out.push((addr.clone(), f)),
                CopyTree::Fork(a, b) => {
                    addr.push('0');
                    go(a, addr, out);
                    addr.pop();
                    addr.push('1');
                    go(b, addr, out);
                    addr.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut String::new(), &mut out);
        out
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            CopyTree::Leaf(_) => 1,
            CopyTree::Fork(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    pub fn leaf_at(&self, addr: &str) -> Option<&Formula> {
        match (self, addr.as_bytes().first()) {
            (CopyTree::Leaf(f), None) => Some(f),
            (CopyTree::Fork(a, _), Some(b'0')) => a.leaf_at(&addr[1..]),
            (CopyTree::Fork(_, b), Some(b'1')) => b.leaf_at(&addr[1..]),
            _ => None,
        }
    }

    fn replicate_at(&self, addr: &str) -> Option<CopyTree> {
        match (self, addr.as_bytes().first()) {
            (CopyTree::Leaf(f), None) => Some(CopyTree::Fork(
                Box::new(CopyTree::Leaf(f.clone())),
                Box::new(CopyTree::Leaf(f.clone())),
            )),
            (CopyTree::Fork(a, b), Some(b'0')) => Some(CopyTree::Fork(
                Box::new(a.replicate_at(&addr[1..])?),
                b.clone(),
            )),
            (CopyTree::Fork(a, b), Some(b'1')) => Some(CopyTree::Fork(
                a.clone(),
                Box::new(b.replicate_at(&addr[1..])?),
            )),
            _ => None,
        }
    }

    /// Applies `f` to every leaf whose address extends `prefix`. `Ok(None)`
    /// when no leaf matches.
    fn map_under(
        &self,
        prefix: &str,
        f: &impl Fn(&Formula) -> Result<Formula, IllegalReason>,
    ) -> Result<Option<CopyTree>, IllegalReason> {
        match self {
            CopyTree::Leaf(g) => {
                if prefix.is_empty() {
                    Ok(Some(CopyTree::Leaf(f(g)?)))
                } else {
                    Ok(None)
                }
            }
            CopyTree::Fork(a, b) => match prefix.as_bytes().first() {
                Some(b'0') => Ok(a
                    .map_under(&prefix[1..], f)?
                    .map(|a2| CopyTree::Fork(Box::new(a2), b.clone()))),
                Some(b'1') => Ok(b
                    .map_under(&prefix[1..], f)?
                    .map(|b2| CopyTree::Fork(a.clone(), Box::new(b2)))),
                Some(_) => Ok(None),
                None => {
                    // empty prefix covers both subtrees
                    let a2 = a.map_under("", f)?;
                    let b2 = b.map_under("", f)?;
                    match (a2, b2) {
                        (Some(a2), Some(b2)) => {
                            Ok(Some(CopyTree::Fork(Box::new(a2), Box::new(b2))))
                        }
                        _ => Ok(None),
                    }
                }
            },
        }
    }

    fn substitute_const_everywhere(&self, var: &str, c: Constant) -> CopyTree {
        match self {
            CopyTree::Leaf(f) => CopyTree::Leaf(substitute_const(f, var, c)),
            CopyTree::Fork(a, b) => CopyTree::Fork(
                Box::new(a.substitute_const_everywhere(var, c)),
                Box::new(b.substitute_const_everywhere(var, c)),
            ),
        }
    }
}

impl fmt::Display for CopyTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopyTree::Leaf(g) => write!(f, "{g}"),
            CopyTree::Fork(a, b) => write!(f, "({a} o {b})"),
        }
    }
}

/// The arena being played: a bare formula, a sequent (antecedent members are
/// recurrence trees, played under role inversion), or a bare recurrence tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Arena {
    Formula(Formula),
    Sequent {
        antecedent: Vec<CopyTree>,
        succedent: Formula,
    },
    Recurrence(CopyTree),
}

/// A position of the closure of a game under play.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GameState {
    /// Free variables still awaiting Environment's `#c` choices, in
    /// lexicographic order.
    pub pending_closure: Vec<String>,
    /// Closure choices made so far.
    pub closure: Vec<(String, Constant)>,
    pub arena: Arena,
}

impl GameState {
    /// Initial position of the closure of a sequent: every antecedent member
    /// is a single-leaf tree at the empty address. A sequent with an empty
    /// antecedent plays as the bare succedent formula, with unprefixed moves.
    pub fn for_sequent(s: &Sequent) -> GameState {
        if s.antecedent.is_empty() {
            return GameState::for_formula(&s.succedent);
        }
        GameState {
            pending_closure: s.free_vars(),
            closure: Vec::new(),
            arena: Arena::Sequent {
                antecedent: s.antecedent.iter().cloned().map(CopyTree::Leaf).collect(),
                succedent: s.succedent.clone(),
            },
        }
    }

    /// Initial position of the closure of a bare formula.
    pub fn for_formula(f: &Formula) -> GameState {
        GameState {
            pending_closure: f.free_vars(),
            closure: Vec::new(),
            arena: Arena::Formula(f.clone()),
        }
    }

    /// Initial position of a bare recurrence game.
    pub fn for_recurrence(f: &Formula) -> GameState {
        GameState {
            pending_closure: f.free_vars(),
            closure: Vec::new(),
            arena: Arena::Recurrence(CopyTree::Leaf(f.clone())),
        }
    }

    pub fn in_closure_phase(&self) -> bool {
        !self.pending_closure.is_empty()
    }

    /// Parses a move string in the grammar this arena expects.
    pub fn parse_move(&self, text: &str) -> Option<Move> {
        if self.in_closure_phase() {
            if let Some(num) = text.strip_prefix('#') {
                return Some(Move::Closure(Constant::parse_numeral(num)?));
            }
        }
        match &self.arena {
            Arena::Formula(_) => Some(Move::InFormula(parse_formula_move(text)?)),
            Arena::Recurrence(_) => Some(Move::InTree(parse_tree_move(text)?)),
            Arena::Sequent { .. } => {
                if let Some(rest) = text.strip_prefix("1.") {
                    return Some(Move::Succedent(parse_formula_move(rest)?));
                }
                let rest = text.strip_prefix("0.")?;
                let dot = rest.find('.')?;
                let digits = &rest[..dot];
                if digits.is_empty()
                    || (digits.len() > 1 && digits.starts_with('0'))
                    || !digits.bytes().all(|b| b.is_ascii_digit())
                {
                    return None;
                }
                let idx: usize = digits.parse().ok()?;
                Some(Move::Antecedent(idx, parse_tree_move(&rest[dot + 1..])?))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IllegalReason {
    Malformed,
    ClosureChoiceByMachine,
    MoveDuringClosure,
    NoSuchComponent,
    NoSuchChild,
    NotAChoice,
    WrongMover,
    NoLeafUnderPrefix,
    NotALeaf,
    ReplicationByWrongPlayer,
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IllegalReason::Malformed => "move does not match the move grammar",
            IllegalReason::ClosureChoiceByMachine => "closure choices belong to Environment",
            IllegalReason::MoveDuringClosure => "game move before closure is complete",
            IllegalReason::NoSuchComponent => "no such antecedent member",
            IllegalReason::NoSuchChild => "path leads out of the formula",
            IllegalReason::NotAChoice => "no resolvable choice operator at that position",
            IllegalReason::WrongMover => "that choice belongs to the other player",
            IllegalReason::NoLeafUnderPrefix => "no leaf address extends the given prefix",
            IllegalReason::NotALeaf => "replication must target a leaf address",
            IllegalReason::ReplicationByWrongPlayer => "replication belongs to the other player",
        };
        f.write_str(s)
    }
}

/// An illegal move; the offending player loses the run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Illegal {
    pub offender: Player,
    pub reason: IllegalReason,
}

impl fmt::Display for Illegal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "illegal move by {}: {}", self.offender, self.reason)
    }
}

/// Applies a formula move. `flipped` inverts the choosing player (antecedent
/// components are played under negation).
fn apply_formula_move(
    f: &Formula,
    fm: &FormulaMove,
    mover: Player,
    flipped: bool,
) -> Result<Formula, IllegalReason> {
    // blind quantifiers are transparent to addressing
    match f {
        Formula::All(x, a) => {
            let body = apply_formula_move(a, fm, mover, flipped)?;
            return Ok(Formula::All(x.clone(), Box::new(body)));
        }
        Formula::Ex(x, a) => {
            let body = apply_formula_move(a, fm, mover, flipped)?;
            return Ok(Formula::Ex(x.clone(), Box::new(body)));
        }
        _ => {}
    }
    if let Some((&i, rest)) = fm.path.split_first() {
        let tail = FormulaMove {
            path: rest.to_vec(),
            act: fm.act.clone(),
        };
        return match f {
            Formula::And(a, b) | Formula::Or(a, b) => {
                let is_and = matches!(f, Formula::And(..));
                let (a2, b2) = if i == 0 {
                    (
                        Box::new(apply_formula_move(a, &tail, mover, flipped)?),
                        b.clone(),
                    )
                } else {
                    (
                        a.clone(),
                        Box::new(apply_formula_move(b, &tail, mover, flipped)?),
                    )
                };
                Ok(if is_and {
                    Formula::And(a2, b2)
                } else {
                    Formula::Or(a2, b2)
                })
            }
            _ => Err(IllegalReason::NoSuchChild),
        };
    }
    // path exhausted: the act must resolve a choice operator here
    let owner_ok = |normal_owner: Player| {
        let owner = if flipped {
            normal_owner.opponent()
        } else {
            normal_owner
        };
        owner == mover
    };
    match (&fm.act, f) {
        (FormulaAct::Pick(i), Formula::ChAnd(a, b)) => {
            if !owner_ok(Player::Environment) {
                return Err(IllegalReason::WrongMover);
            }
            Ok(if *i == 0 { (**a).clone() } else { (**b).clone() })
        }
        (FormulaAct::Pick(i), Formula::ChOr(a, b)) => {
            if !owner_ok(Player::Machine) {
                return Err(IllegalReason::WrongMover);
            }
            Ok(if *i == 0 { (**a).clone() } else { (**b).clone() })
        }
        (FormulaAct::Choose(c), Formula::ChAll(x, a)) => {
            if !owner_ok(Player::Environment) {
                return Err(IllegalReason::WrongMover);
            }
            Ok(substitute_const(a, x, *c))
        }
        (FormulaAct::Choose(c), Formula::ChEx(x, a)) => {
            if !owner_ok(Player::Machine) {
                return Err(IllegalReason::WrongMover);
            }
            Ok(substitute_const(a, x, *c))
        }
        _ => Err(IllegalReason::NotAChoice),
    }
}

fn apply_tree_move(
    tree: &CopyTree,
    tm: &TreeMove,
    mover: Player,
    flipped: bool,
) -> Result<CopyTree, IllegalReason> {
    match tm {
        TreeMove::Replicate(w) => {
            // replication belongs to Environment in a bare recurrence and to
            // Machine inside an antecedent component
            let owner = if flipped {
                Player::Machine
            } else {
                Player::Environment
            };
            if mover != owner {
                return Err(IllegalReason::ReplicationByWrongPlayer);
            }
            tree.replicate_at(w).ok_or(IllegalReason::NotALeaf)
        }
        TreeMove::At(u, fm) => apply_tree_move_at(tree, u, fm, mover, flipped),
    }
}

fn apply_tree_move_at(
    tree: &CopyTree,
    u: &str,
    fm: &FormulaMove,
    mover: Player,
    flipped: bool,
) -> Result<CopyTree, IllegalReason> {
    tree.map_under(u, &|g| apply_formula_move(g, fm, mover, flipped))?
        .ok_or(IllegalReason::NoLeafUnderPrefix)
}

/// Checks one labmove against a position, returning the next position or the
/// offending player.
pub fn check_move(st: &GameState, lm: &LabMove) -> Result<GameState, Illegal> {
    let offend = |reason| Illegal {
        offender: lm.player,
        reason,
    };
    let mv = st
        .parse_move(&lm.text)
        .ok_or_else(|| offend(IllegalReason::Malformed))?;
    if st.in_closure_phase() {
        return match mv {
            Move::Closure(c) => {
                if lm.player != Player::Environment {
                    return Err(offend(IllegalReason::ClosureChoiceByMachine));
                }
                let mut next = st.clone();
                let var = next.pending_closure.remove(0);
                next.closure.push((var.clone(), c));
                next.arena = match &next.arena {
                    Arena::Formula(f) => Arena::Formula(substitute_const(f, &var, c)),
                    Arena::Recurrence(t) => {
                        Arena::Recurrence(t.substitute_const_everywhere(&var, c))
                    }
                    Arena::Sequent {
                        antecedent,
                        succedent,
                    } => Arena::Sequent {
                        antecedent: antecedent
                            .iter()
                            .map(|t| t.substitute_const_everywhere(&var, c))
                            .collect(),
                        succedent: substitute_const(succedent, &var, c),
                    },
                };
                Ok(next)
            }
            _ => Err(offend(IllegalReason::MoveDuringClosure)),
        };
    }
    let mut next = st.clone();
    match (&mut next.arena, mv) {
        (Arena::Formula(f), Move::InFormula(fm)) => {
            *f = apply_formula_move(f, &fm, lm.player, false).map_err(offend)?;
        }
        (Arena::Recurrence(t), Move::InTree(tm)) => {
            *t = apply_tree_move(t, &tm, lm.player, false).map_err(offend)?;
        }
        (Arena::Sequent { succedent, .. }, Move::Succedent(fm)) => {
            *succedent = apply_formula_move(succedent, &fm, lm.player, false).map_err(offend)?;
        }
        (Arena::Sequent { antecedent, .. }, Move::Antecedent(i, tm)) => {
            let tree = antecedent
                .get(i)
                .ok_or_else(|| offend(IllegalReason::NoSuchComponent))?;
            antecedent[i] = apply_tree_move(tree, &tm, lm.player, true).map_err(offend)?;
        }
        _ => return Err(offend(IllegalReason::Malformed)),
    }
    Ok(next)
}

/// Folds [`check_move`] over a run; reports the first illegality with its
/// position index.
pub fn apply_run(st: &GameState, run: &[LabMove]) -> Result<GameState, (Illegal, usize)> {
    let mut cur = st.clone();
    for (i, lm) in run.iter().enumerate() {
        cur = check_move(&cur, lm).map_err(|e| (e, i))?;
    }
    Ok(cur)
}

/// Win evaluation on a position: the machine wins a sequent position iff the
/// succedent remainder reads true or some antecedent leaf remainder reads
/// false (each through its elementarization); it wins a recurrence position
/// iff every leaf reads true; an incomplete closure counts as machine-won
/// (the environment stalled).
pub fn wn(st: &GameState, interp: &Interpretation) -> Result<Player, EvalError> {
    if st.in_closure_phase() {
        return Ok(Player::Machine);
    }
    let truth = |f: &Formula| -> Result<bool, EvalError> {
        eval_truth(&elementarize(f), interp, &mut Valuation::new())
    };
    let won = match &st.arena {
        Arena::Formula(f) => truth(f)?,
        Arena::Recurrence(t) => {
            let mut all = true;
            for (_, leaf) in t.leaves() {
                if !truth(leaf)? {
                    all = false;
                    break;
                }
            }
            all
        }
        Arena::Sequent {
            antecedent,
            succedent,
        } => {
            let mut result = truth(succedent)?;
            if !result {
                'outer: for t in antecedent {
                    for (_, leaf) in t.leaves() {
                        if !truth(leaf)? {
                            result = true;
                            break 'outer;
                        }
                    }
                }
            }
            result
        }
    };
    Ok(if won {
        Player::Machine
    } else {
        Player::Environment
    })
}

impl fmt::Display for GameState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.pending_closure.is_empty() {
            write!(f, "#[{}] ", self.pending_closure.join(","))?;
        }
        match &self.arena {
            Arena::Formula(g) => write!(f, "{g}"),
            Arena::Recurrence(t) => write!(f, "o| {t}"),
            Arena::Sequent {
                antecedent,
                succedent,
            } => {
                for (i, t) in antecedent.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                if antecedent.is_empty() {
                    write!(f, "=> {succedent}")
                } else {
                    write!(f, " => {succedent}")
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// projections and the delay relation

/// Run played in component `i` of a parallel combination: keeps `i.`-prefixed
/// moves, stripped of the prefix.
pub fn projection_component(run: &[LabMove], i: usize) -> Run {
    let prefix = format!("{i}.");
    run.iter()
        .filter_map(|lm| {
            lm.text
                .strip_prefix(&prefix)
                .map(|rest| LabMove::new(lm.player, rest))
        })
        .collect()
}

/// Run played in the copy selected by the bit string `v`: keeps `u.`-prefixed
/// moves with `u` a prefix of `v`, stripped of the address. Replicative moves
/// and moves outside the `u.rest` shape are dropped.
pub fn projection_bits(run: &[LabMove], v: &str) -> Run {
    run.iter()
        .filter_map(|lm| {
            let dot = lm.text.find('.')?;
            let u = &lm.text[..dot];
            if !u.bytes().all(|b| b == b'0' || b == b'1') {
                return None;
            }
            if v.len() >= u.len() && v.as_bytes()[..u.len()] == *u.as_bytes() {
                Some(LabMove::new(lm.player, &lm.text[dot + 1..]))
            } else {
                None
            }
        })
        .collect()
}

/// Whether `phi` is a `p`-delay of `gamma`: both players' move subsequences
/// agree, and `p`'s moves are only ever postponed relative to the opponent's.
pub fn is_delay(phi: &[LabMove], gamma: &[LabMove], p: Player) -> bool {
    let by = |run: &[LabMove], pl: Player| -> Vec<String> {
        run.iter()
            .filter(|lm| lm.player == pl)
            .map(|lm| lm.text.clone())
            .collect()
    };
    for pl in [Player::Machine, Player::Environment] {
        if by(phi, pl) != by(gamma, pl) {
            return false;
        }
    }
    let positions = |run: &[LabMove], pl: Player| -> Vec<usize> {
        run.iter()
            .enumerate()
            .filter(|(_, lm)| lm.player == pl)
            .map(|(i, _)| i)
            .collect()
    };
    let (p_gamma, o_gamma) = (positions(gamma, p), positions(gamma, p.opponent()));
    let (p_phi, o_phi) = (positions(phi, p), positions(phi, p.opponent()));
    for (n, &gp) in p_gamma.iter().enumerate() {
        for (k, &go) in o_gamma.iter().enumerate() {
            if gp > go && p_phi[n] <= o_phi[k] {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// legal-move enumeration and the winnability oracle

/// Bounds for enumeration: constants drawn from `pool`, at most
/// `replications_per_tree` extra copies per recurrence tree.
#[derive(Clone, Debug)]
pub struct EnumCaps {
    pub pool: Vec<Constant>,
    pub replications_per_tree: usize,
}

impl Default for EnumCaps {
    fn default() -> Self {
        EnumCaps {
            pool: vec![Constant(0), Constant(1)],
            replications_per_tree: 4,
        }
    }
}

fn formula_moves(
    f: &Formula,
    flipped: bool,
    pool: &[Constant],
    out: &mut Vec<(Player, FormulaMove)>,
) {
    let owner = |normal: Player| if flipped { normal.opponent() } else { normal };
    for (kind, normal_owner) in [
        (ChoiceKind::ChAnd, Player::Environment),
        (ChoiceKind::ChOr, Player::Machine),
        (ChoiceKind::ChAll, Player::Environment),
        (ChoiceKind::ChEx, Player::Machine),
    ] {
        for occ in surface_occurrences(f, kind) {
            // parallel path: the occurrence path restricted to the children
            // of binary connectives (quantifiers are transparent)
            let mut path = Vec::new();
            let mut cur = f;
            for idx in &occ {
                match cur {
                    Formula::And(..) | Formula::Or(..) => path.push(*idx),
                    _ => {}
                }
                cur = cur.children()[*idx as usize];
            }
            match kind {
                ChoiceKind::ChAnd | ChoiceKind::ChOr => {
                    for i in 0..2 {
                        out.push((
                            owner(normal_owner),
                            FormulaMove {
                                path: path.clone(),
                                act: FormulaAct::Pick(i),
                            },
                        ));
                    }
                }
                ChoiceKind::ChAll | ChoiceKind::ChEx => {
                    for c in pool {
                        out.push((
                            owner(normal_owner),
                            FormulaMove {
                                path: path.clone(),
                                act: FormulaAct::Choose(*c),
                            },
                        ));
                    }
                }
            }
        }
    }
}

/// Enumerates focused legal moves for both players under the caps. Unfocused
/// moves are accepted by [`check_move`] but never enumerated.
pub fn enumerate_moves(st: &GameState, caps: &EnumCaps) -> Vec<(Player, String)> {
    let mut out = Vec::new();
    if st.in_closure_phase() {
        for c in &caps.pool {
            out.push((Player::Environment, format!("#{c}")));
        }
        return out;
    }
    match &st.arena {
        Arena::Formula(f) => {
            let mut fms = Vec::new();
            formula_moves(f, false, &caps.pool, &mut fms);
            for (p, fm) in fms {
                out.push((p, format_formula_move(&fm)));
            }
        }
        Arena::Recurrence(t) => {
            tree_moves(t, false, caps, &mut out, &|tm| format_tree_move(&tm));
        }
        Arena::Sequent {
            antecedent,
            succedent,
        } => {
            let mut fms = Vec::new();
            formula_moves(succedent, false, &caps.pool, &mut fms);
            for (p, fm) in fms {
                out.push((p, format!("1.{}", format_formula_move(&fm))));
            }
            for (i, t) in antecedent.iter().enumerate() {
                tree_moves(t, true, caps, &mut out, &move |tm| {
                    format!("0.{i}.{}", format_tree_move(&tm))
                });
            }
        }
    }
    out
}

fn tree_moves(
    t: &CopyTree,
    flipped: bool,
    caps: &EnumCaps,
    out: &mut Vec<(Player, String)>,
    render: &impl Fn(TreeMove) -> String,
) {
    let replicator = if flipped {
        Player::Machine
    } else {
        Player::Environment
    };
    let budget_left = t.leaf_count() <= caps.replications_per_tree;
    for (addr, leaf) in t.leaves() {
        if budget_left {
            out.push((replicator, render(TreeMove::Replicate(addr.clone()))));
        }
        let mut fms = Vec::new();
        formula_moves(leaf, flipped, &caps.pool, &mut fms);
        for (p, fm) in fms {
            out.push((p, render(TreeMove::At(addr.clone(), fm))));
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    Budget,
    Eval(EvalError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Budget => f.write_str("oracle budget exceeded"),
            OracleError::Eval(e) => write!(f, "{e}"),
        }
    }
}

/// Brute-force winnability: the machine can win from `st` iff it has a
/// winning move now, or the position already reads machine-won and every
/// environment move leads to a winnable position.
pub fn winnable(
    st: &GameState,
    interp: &Interpretation,
    caps: &EnumCaps,
    budget: &mut usize,
) -> Result<bool, OracleError> {
    let mut memo = BTreeMap::new();
    winnable_memo(st, interp, caps, budget, &mut memo)
}

fn winnable_memo(
    st: &GameState,
    interp: &Interpretation,
    caps: &EnumCaps,
    budget: &mut usize,
    memo: &mut BTreeMap<String, bool>,
) -> Result<bool, OracleError> {
    let key = st.to_string();
    if let Some(&v) = memo.get(&key) {
        return Ok(v);
    }
    if *budget == 0 {
        return Err(OracleError::Budget);
    }
    *budget -= 1;
    let moves = enumerate_moves(st, caps);
    let mut result = false;
    for (p, m) in &moves {
        if *p != Player::Machine {
            continue;
        }
        let next =
            check_move(st, &LabMove::new(*p, m.clone())).expect("enumerated move must be legal");
        if winnable_memo(&next, interp, caps, budget, memo)? {
            result = true;
            break;
        }
    }
    if !result && wn(st, interp).map_err(OracleError::Eval)? == Player::Machine {
        result = true;
        for (p, m) in &moves {
            if *p != Player::Environment {
                continue;
            }
            let next = check_move(st, &LabMove::new(*p, m.clone()))
                .expect("enumerated move must be legal");
            if !winnable_memo(&next, interp, caps, budget, memo)? {
                result = false;
                break;
            }
        }
    }
    memo.insert(key, result);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent};
    use alloc::string::ToString;

    fn run_of(moves: &[(Player, &str)]) -> Run {
        moves.iter().map(|(p, m)| LabMove::new(*p, *m)).collect()
    }

    const M: Player = Player::Machine;
    const E: Player = Player::Environment;

    // the two-choice implication with thirteen legal runs
    fn two_choice_game() -> GameState {
        GameState::for_formula(&parse_formula("(0=0 & 0=1) -> (10=11 & 10=10)").unwrap())
    }

    #[test]
    fn two_choice_game_verdicts() {
        let st = two_choice_game();
        let interp = Interpretation::standard(4);
        // empty run: the consequent's unresolved choice conjunction reads true
        assert_eq!(wn(&st, &interp).unwrap(), M);
        // B 1.0 brings the consequent down to the false 10=11
        let s4 = apply_run(&st, &run_of(&[(E, "1.0")])).unwrap();
        assert_eq!(wn(&s4, &interp).unwrap(), E);
        // T 0.1 recovers in the antecedent, in either order
        let s8 = apply_run(&st, &run_of(&[(M, "0.1"), (E, "1.0")])).unwrap();
        assert_eq!(wn(&s8, &interp).unwrap(), M);
        let s9 = apply_run(&st, &run_of(&[(E, "1.0"), (M, "0.1")])).unwrap();
        assert_eq!(wn(&s9, &interp).unwrap(), M);
        // wrong movers are illegal
        assert!(check_move(&st, &LabMove::new(M, "1.0")).is_err());
        assert!(check_move(&st, &LabMove::new(E, "0.0")).is_err());
    }

    #[test]
    fn recurrence_trace() {
        let g = parse_formula("p | (q & (r & (s | t)))").unwrap();
        let st = GameState::for_recurrence(&g);
        let moves = run_of(&[
            (E, ":"),
            (M, ".1"),
            (E, "0.0"),
            (E, "1.1"),
            (E, ":1"),
            (E, "10.0"),
            (E, "11.1"),
            (M, "11.0"),
        ]);
        let expected = [
            "o| (p | q & r & (s | t) o p | q & r & (s | t))",
            "o| (q & r & (s | t) o q & r & (s | t))",
            "o| (q o q & r & (s | t))",
            "o| (q o r & (s | t))",
            "o| (q o (r & (s | t) o r & (s | t)))",
            "o| (q o (r o r & (s | t)))",
            "o| (q o (r o s | t))",
            "o| (q o (r o s))",
        ];
        let mut cur = st.clone();
        for (i, lm) in moves.iter().enumerate() {
            cur = check_move(&cur, lm).unwrap();
            assert_eq!(cur.to_string(), expected[i], "after move {}", i + 1);
        }
        // projections select the runs of the three final copies
        let strip = |r: Run| -> Vec<String> { r.iter().map(|l| l.to_string()).collect() };
        assert_eq!(strip(projection_bits(&moves, "0000")), ["T 1", "B 0"]);
        assert_eq!(
            strip(projection_bits(&moves, "1000")),
            ["T 1", "B 1", "B 0"]
        );
        assert_eq!(
            strip(projection_bits(&moves, "1100")),
            ["T 1", "B 1", "B 1", "T 0"]
        );
        // a run with no dot-prefixed moves projects to the empty run
        assert!(projection_bits(&run_of(&[(E, "#10")]), "0").is_empty());
    }

    #[test]
    fn replication_grows_one_leaf() {
        let g = parse_formula("p | q").unwrap();
        let st = GameState::for_recurrence(&g);
        let s1 = check_move(&st, &LabMove::new(E, ":")).unwrap();
        match &s1.arena {
            Arena::Recurrence(t) => assert_eq!(t.leaf_count(), 2),
            _ => panic!(),
        }
        // the machine may not replicate in a bare recurrence
        assert!(check_move(&st, &LabMove::new(M, ":")).is_err());
        // replication must target a leaf
        assert!(check_move(&s1, &LabMove::new(E, ":")).is_err());
    }

    fn cube_sequent() -> Sequent {
        parse_sequent(
            "Ax: (cube(x)=mul(mul(x,x),x)), !x: !y: ?z: (z=mul(x,y)) => !x: ?y: (y=cube(x))",
        )
        .unwrap()
    }

    #[test]
    fn cube_sequent_trace() {
        let st = GameState::for_sequent(&cube_sequent());
        assert!(!st.in_closure_phase());
        let moves = run_of(&[
            (M, "0.1.:"),
            (E, "1.#10"),
            (M, "0.1.0.#10"),
            (M, "0.1.0.#10"),
            (E, "0.1.0.#100"),
            (M, "0.1.1.#100"),
            (M, "0.1.1.#10"),
            (E, "0.1.1.#1000"),
            (M, "1.#1000"),
        ]);
        let final_st = apply_run(&st, &moves).unwrap();
        assert_eq!(
            final_st.to_string(),
            "Ax: cube(x)=mul(mul(x,x),x), (100=mul(10,10) o 1000=mul(100,10)) => 1000=cube(10)"
        );
        let interp = Interpretation::standard(16);
        assert_eq!(wn(&final_st, &interp).unwrap(), M);
        // legality is prefix-closed
        for k in 0..moves.len() {
            assert!(apply_run(&st, &moves[..k]).is_ok());
        }
    }

    #[test]
    fn even_odd_formula_trace() {
        let g =
            parse_formula("Ay: ((even(y) | odd(y)) -> !x: (even(add(x,y)) | odd(add(x,y))))")
                .unwrap();
        let st = GameState::for_formula(&g);
        let moves = run_of(&[(E, "1.#11"), (E, "0.0"), (M, "1.1")]);
        let final_st = apply_run(&st, &moves).unwrap();
        assert_eq!(final_st.to_string(), "Ay: (~even(y) \\/ odd(add(11,y)))");
        // empty run leaves the state unchanged
        assert_eq!(apply_run(&st, &[]).unwrap(), st);
    }

    #[test]
    fn closure_phase() {
        let s = parse_sequent("=> p(x)").unwrap();
        let st = GameState::for_sequent(&s);
        assert!(st.in_closure_phase());
        // the machine may not make closure choices
        let err = check_move(&st, &LabMove::new(M, "#1")).unwrap_err();
        assert_eq!(err.offender, M);
        // nor may anyone move in the body yet
        assert!(check_move(&st, &LabMove::new(E, "1.0")).is_err());
        let next = check_move(&st, &LabMove::new(E, "#101")).unwrap();
        assert!(!next.in_closure_phase());
        assert_eq!(next.to_string(), "p(101)");
        // an incomplete closure is machine-won
        let interp = Interpretation::standard(8);
        assert_eq!(wn(&st, &interp).unwrap(), M);
    }

    #[test]
    fn closed_cube_sequent_starts_in_play_phase() {
        let st = GameState::for_sequent(&cube_sequent());
        match &st.arena {
            Arena::Sequent { antecedent, .. } => {
                assert_eq!(antecedent.len(), 2);
                assert!(antecedent.iter().all(|t| t.leaf_count() == 1));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn projection_component_strips_prefix() {
        let run = run_of(&[(M, "0.1"), (E, "1.0")]);
        assert_eq!(projection_component(&run, 1), run_of(&[(E, "0")]));
        assert_eq!(projection_component(&run, 0), run_of(&[(M, "1")]));
        assert!(projection_component(&[], 0).is_empty());
    }

    #[test]
    fn delay_examples() {
        let gamma = run_of(&[(M, "b1"), (E, "a1"), (M, "b2"), (E, "a2")]);
        let phi = run_of(&[(E, "a1"), (M, "b1"), (E, "a2"), (M, "b2")]);
        assert!(is_delay(&phi, &gamma, M));
        // every run is a delay of itself, for either player
        assert!(is_delay(&gamma, &gamma, M));
        assert!(is_delay(&gamma, &gamma, E));
        // moving the environment's move later is not an environment delay
        let gamma2 = run_of(&[(M, "b"), (E, "a")]);
        let phi2 = run_of(&[(E, "a"), (M, "b")]);
        assert!(!is_delay(&phi2, &gamma2, E));
        assert!(is_delay(&phi2, &gamma2, M));
    }

    #[test]
    fn winnable_oracle() {
        let interp = Interpretation::standard(4);
        let caps = EnumCaps::default();
        let mut budget = 100_000;
        assert!(winnable(&two_choice_game(), &interp, &caps, &mut budget).unwrap());
        let top = GameState::for_formula(&Formula::Top);
        let bot = GameState::for_formula(&Formula::Bot);
        assert!(winnable(&top, &interp, &caps, &mut budget).unwrap());
        assert!(!winnable(&bot, &interp, &caps, &mut budget).unwrap());
        // the machine answers the environment's parity challenge for every
        // pool constant
        let s = parse_sequent("=> even(x) | odd(x)").unwrap();
        let st = GameState::for_sequent(&s);
        let caps = EnumCaps {
            pool: vec![Constant(0), Constant(1), Constant(2)],
            replications_per_tree: 4,
        };
        assert!(winnable(&st, &interp, &caps, &mut budget).unwrap());
        // winnable agrees with wn on move-free states
        let f = parse_formula("0=0 /\\ Ax: (x=x)").unwrap();
        let stf = GameState::for_formula(&f);
        assert!(winnable(&stf, &interp, &caps, &mut budget).unwrap());
        assert_eq!(wn(&stf, &interp).unwrap(), M);
    }

    #[test]
    fn unfocused_moves_are_accepted() {
        let g = parse_formula("p & q").unwrap();
        let st = GameState::for_recurrence(&g);
        let st = check_move(&st, &LabMove::new(E, ":")).unwrap();
        // the empty prefix applies to both leaves at once
        let st = check_move(&st, &LabMove::new(E, ".0")).unwrap();
        assert_eq!(st.to_string(), "o| (p o p)");
        // but enumeration only yields focused moves
        let st2 = GameState::for_recurrence(&parse_formula("p & q").unwrap());
        let st2 = check_move(&st2, &LabMove::new(E, ":")).unwrap();
        let moves = enumerate_moves(&st2, &EnumCaps::default());
        assert!(moves.iter().all(|(_, m)| !m.starts_with('.')));
    }
}
