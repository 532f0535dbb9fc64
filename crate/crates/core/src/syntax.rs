//! Abstract syntax, parsing and printing for formulas and sequents, plus the
//! structural operations the rest of the crate is built on: elementarization,
//! substitution, free-variable listing, surface-occurrence queries and native
//! magnitude.
//!
//! Formulas are stored in negation normal form: negation occurs only on
//! atoms. `~` over compound formulas and `->` are parser sugar, eliminated by
//! De Morgan rewriting at parse time. Bound variables are renamed at parse
//! time (with apostrophe suffixes) so that all binders are pairwise distinct
//! and disjoint from every free variable of the enclosing sequent.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// A binary-numeral constant. The numeral for zero prints as `0` and has bit
/// length 0; all other numerals start with `1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Constant(pub u64);

impl Constant {
    /// Bit length of the numeral: 0 for the constant 0, otherwise the number
    /// of binary digits.
    pub fn bit_len(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// Parses a binary numeral: `0` or `1(0|1)*`. Leading zeros are rejected.
    pub fn parse_numeral(s: &str) -> Option<Constant> {
        if s.is_empty() || s.len() > 64 || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return None;
        }
        if s.len() > 1 && s.starts_with('0') {
            return None;
        }
        let mut v: u64 = 0;
        for b in s.bytes() {
            v = (v << 1) | u64::from(b - b'0');
        }
        Some(Constant(v))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let mut digits = [0u8; 64];
        let mut n = self.0;
        let mut i = 0;
        while n > 0 {
            digits[i] = b'0' + (n & 1) as u8;
            n >>= 1;
            i += 1;
        }
        while i > 0 {
            i -= 1;
            f.write_str(if digits[i] == b'0' { "0" } else { "1" })?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(String),
    Const(Constant),
    App(String, Vec<Term>),
}

impl Term {
    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    fn substitute(&self, map: &BTreeMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map)).collect())
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Predicate position of an atom: the logical identity `=` or a user letter.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pred {
    Eq,
    User(String),
}

/// An atom, possibly negated. Negation lives only here.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub positive: bool,
    pub pred: Pred,
    pub args: Vec<Term>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Top,
    Bot,
    Atom(Atom),
    /// Parallel conjunction `/\`.
    And(Box<Formula>, Box<Formula>),
    /// Parallel disjunction `\/`.
    Or(Box<Formula>, Box<Formula>),
    /// Choice conjunction `&`.
    ChAnd(Box<Formula>, Box<Formula>),
    /// Choice disjunction `|`.
    ChOr(Box<Formula>, Box<Formula>),
    /// Blind universal quantifier `Ax:`.
    All(String, Box<Formula>),
    /// Blind existential quantifier `Ex:`.
    Ex(String, Box<Formula>),
    /// Choice universal quantifier `!x:`.
    ChAll(String, Box<Formula>),
    /// Choice existential quantifier `?x:`.
    ChEx(String, Box<Formula>),
}

/// A sequent `G1, ..., Gn => F`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Formula,
}

/// Path from a formula root to a subformula: child indices (0 for quantifier
/// bodies, 0/1 for binary connectives).
pub type OccurrencePath = Vec<u8>;

/// The operator kinds a surface-occurrence query can ask for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChoiceKind {
    ChAnd,
    ChOr,
    ChAll,
    ChEx,
}

impl Formula {
    /// Negation: swaps each operator with its dual and toggles atom signs.
    /// The result is again in negation normal form.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            Formula::Atom(a) => Formula::Atom(Atom {
                positive: !a.positive,
                ..a.clone()
            }),
            Formula::And(a, b) => Formula::Or(Box::new(a.negate()), Box::new(b.negate())),
            Formula::Or(a, b) => Formula::And(Box::new(a.negate()), Box::new(b.negate())),
            Formula::ChAnd(a, b) => Formula::ChOr(Box::new(a.negate()), Box::new(b.negate())),
            Formula::ChOr(a, b) => Formula::ChAnd(Box::new(a.negate()), Box::new(b.negate())),
            Formula::All(x, a) => Formula::Ex(x.clone(), Box::new(a.negate())),
            Formula::Ex(x, a) => Formula::All(x.clone(), Box::new(a.negate())),
            Formula::ChAll(x, a) => Formula::ChEx(x.clone(), Box::new(a.negate())),
            Formula::ChEx(x, a) => Formula::ChAll(x.clone(), Box::new(a.negate())),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => vec![],
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::ChAnd(a, b)
            | Formula::ChOr(a, b) => vec![a, b],
            Formula::All(_, a) | Formula::Ex(_, a) | Formula::ChAll(_, a) | Formula::ChEx(_, a) => {
                vec![a]
            }
        }
    }

    pub fn subformula(&self, path: &[u8]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i as usize)?;
        }
        Some(cur)
    }

    /// Replaces the subformula at `path` by `repl`. Panics on a bad path.
    pub fn replace_at(&self, path: &[u8], repl: Formula) -> Formula {
        if path.is_empty() {
            return repl;
        }
        let (i, rest) = (path[0], &path[1..]);
        let sub = |a: &Formula, b: &Formula, k: u8| -> (Box<Formula>, Box<Formula>) {
            if k == 0 {
                (Box::new(a.replace_at(rest, repl.clone())), Box::new(b.clone()))
            } else {
                (Box::new(a.clone()), Box::new(b.replace_at(rest, repl.clone())))
            }
        };
        match self {
            Formula::And(a, b) => {
                let (a, b) = sub(a, b, i);
                Formula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = sub(a, b, i);
                Formula::Or(a, b)
            }
            Formula::ChAnd(a, b) => {
                let (a, b) = sub(a, b, i);
                Formula::ChAnd(a, b)
            }
            Formula::ChOr(a, b) => {
                let (a, b) = sub(a, b, i);
                Formula::ChOr(a, b)
            }
            Formula::All(x, a) => Formula::All(x.clone(), Box::new(a.replace_at(rest, repl))),
            Formula::Ex(x, a) => Formula::Ex(x.clone(), Box::new(a.replace_at(rest, repl))),
            Formula::ChAll(x, a) => Formula::ChAll(x.clone(), Box::new(a.replace_at(rest, repl))),
            Formula::ChEx(x, a) => Formula::ChEx(x.clone(), Box::new(a.replace_at(rest, repl))),
            _ => panic!("replace_at: path into a leaf"),
        }
    }

    pub fn is_elementary(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(_) => true,
            Formula::ChAnd(..) | Formula::ChOr(..) | Formula::ChAll(..) | Formula::ChEx(..) => {
                false
            }
            _ => self.children().iter().all(|c| c.is_elementary()),
        }
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(a) => {
                let mut vars = BTreeSet::new();
                for t in &a.args {
                    t.collect_vars(&mut vars);
                }
                for v in vars {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::ChAnd(a, b)
            | Formula::ChOr(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::All(x, a) | Formula::Ex(x, a) | Formula::ChAll(x, a) | Formula::ChEx(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn collect_bound(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::All(x, a) | Formula::Ex(x, a) | Formula::ChAll(x, a) | Formula::ChEx(x, a) => {
                out.insert(x.clone());
                a.collect_bound(out);
            }
            _ => {
                for c in self.children() {
                    c.collect_bound(out);
                }
            }
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<Constant>) {
        fn term(t: &Term, out: &mut BTreeSet<Constant>) {
            match t {
                Term::Const(c) => {
                    out.insert(*c);
                }
                Term::Var(_) => {}
                Term::App(_, args) => {
                    for a in args {
                        term(a, out);
                    }
                }
            }
        }
        match self {
            Formula::Atom(a) => {
                for t in &a.args {
                    term(t, out);
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_constants(out);
                }
            }
        }
    }

    /// Free variables in lexicographic order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.into_iter().collect()
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    /// All variables occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.free_vars().into_iter().collect();
        out.append(&mut self.bound_vars());
        out
    }
}

/// Replaces all choice-disjunctive subformulas by `F` and all
/// choice-conjunctive ones by `T`. The result is elementary.
pub fn elementarize(f: &Formula) -> Formula {
    match f {
        Formula::ChOr(..) | Formula::ChEx(..) => Formula::Bot,
        Formula::ChAnd(..) | Formula::ChAll(..) => Formula::Top,
        Formula::Top | Formula::Bot | Formula::Atom(_) => f.clone(),
        Formula::And(a, b) => {
            Formula::And(Box::new(elementarize(a)), Box::new(elementarize(b)))
        }
        Formula::Or(a, b) => Formula::Or(Box::new(elementarize(a)), Box::new(elementarize(b))),
        Formula::All(x, a) => Formula::All(x.clone(), Box::new(elementarize(a))),
        Formula::Ex(x, a) => Formula::Ex(x.clone(), Box::new(elementarize(a))),
    }
}

/// `||G1|| /\ ... /\ ||Gn|| -> ||F||`, right-nested; just `||F||` when the
/// antecedent is empty. The implication is eliminated by negating the
/// antecedent conjunction.
pub fn elementarize_sequent(s: &Sequent) -> Formula {
    let succ = elementarize(&s.succedent);
    if s.antecedent.is_empty() {
        return succ;
    }
    let mut ante = elementarize(&s.antecedent[s.antecedent.len() - 1]);
    for g in s.antecedent[..s.antecedent.len() - 1].iter().rev() {
        ante = Formula::And(Box::new(elementarize(g)), Box::new(ante));
    }
    Formula::Or(Box::new(ante.negate()), Box::new(succ))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubstError {
    /// A replacement variable is captured by a binder of the formula.
    Collision(String),
}

impl fmt::Display for SubstError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstError::Collision(v) => write!(f, "substitution would capture variable {v}"),
        }
    }
}

/// Simultaneous substitution of free variable occurrences by constants or
/// variables.
pub fn substitute(
    f: &Formula,
    bindings: &BTreeMap<String, Term>,
) -> Result<Formula, SubstError> {
    let bound = f.bound_vars();
    for t in bindings.values() {
        let mut vs = BTreeSet::new();
        t.collect_vars(&mut vs);
        for v in vs {
            if bound.contains(&v) {
                return Err(SubstError::Collision(v));
            }
        }
    }
    fn go(f: &Formula, map: &BTreeMap<String, Term>) -> Formula {
        match f {
            Formula::Top | Formula::Bot => f.clone(),
            Formula::Atom(a) => Formula::Atom(Atom {
                positive: a.positive,
                pred: a.pred.clone(),
                args: a.args.iter().map(|t| t.substitute(map)).collect(),
            }),
            Formula::And(a, b) => Formula::And(Box::new(go(a, map)), Box::new(go(b, map))),
            Formula::Or(a, b) => Formula::Or(Box::new(go(a, map)), Box::new(go(b, map))),
            Formula::ChAnd(a, b) => Formula::ChAnd(Box::new(go(a, map)), Box::new(go(b, map))),
            Formula::ChOr(a, b) => Formula::ChOr(Box::new(go(a, map)), Box::new(go(b, map))),
            Formula::All(x, a) | Formula::Ex(x, a) | Formula::ChAll(x, a) | Formula::ChEx(x, a) => {
                // all binders are distinct from substituted variables by the
                // parse-time convention; shadowing is still honored
                let mut inner = map.clone();
                inner.remove(x);
                let body = Box::new(go(a, &inner));
                match f {
                    Formula::All(..) => Formula::All(x.clone(), body),
                    Formula::Ex(..) => Formula::Ex(x.clone(), body),
                    Formula::ChAll(..) => Formula::ChAll(x.clone(), body),
                    _ => Formula::ChEx(x.clone(), body),
                }
            }
        }
    }
    Ok(go(f, bindings))
}

/// Substitutes a single variable by a constant.
pub fn substitute_const(f: &Formula, var: &str, c: Constant) -> Formula {
    let mut m = BTreeMap::new();
    m.insert(var.to_owned(), Term::Const(c));
    substitute(f, &m).expect("constant substitution cannot collide")
}

/// All surface occurrences (not under any choice operator) of the requested
/// operator kind, in left-to-right order.
pub fn surface_occurrences(f: &Formula, kind: ChoiceKind) -> Vec<OccurrencePath> {
    fn go(f: &Formula, kind: ChoiceKind, path: &mut Vec<u8>, out: &mut Vec<OccurrencePath>) {
        let hit = matches!(
            (f, kind),
            (Formula::ChAnd(..), ChoiceKind::ChAnd)
                | (Formula::ChOr(..), ChoiceKind::ChOr)
                | (Formula::ChAll(..), ChoiceKind::ChAll)
                | (Formula::ChEx(..), ChoiceKind::ChEx)
        );
        if hit {
            out.push(path.clone());
        }
        // choice operators close their scope to further surface occurrences
        match f {
            Formula::ChAnd(..) | Formula::ChOr(..) | Formula::ChAll(..) | Formula::ChEx(..) => {}
            _ => {
                for (i, c) in f.children().into_iter().enumerate() {
                    path.push(i as u8);
                    go(c, kind, path, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(f, kind, &mut Vec::new(), &mut out);
    out
}

impl Sequent {
    pub fn from_formula(f: Formula) -> Sequent {
        Sequent {
            antecedent: Vec::new(),
            succedent: f,
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.antecedent.iter().chain(core::iter::once(&self.succedent))
    }

    /// Free variables of the sequent in lexicographic order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.collect_free(&mut Vec::new(), &mut out);
        }
        out.into_iter().collect()
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.collect_bound(&mut out);
        }
        out
    }

    /// All variables occurring anywhere in the sequent.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.free_vars().into_iter().collect();
        out.append(&mut self.bound_vars());
        out
    }

    pub fn constants(&self) -> BTreeSet<Constant> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            f.collect_constants(&mut out);
        }
        out
    }

    /// Smallest c such that no constant of the sequent has bit length
    /// exceeding c; 0 when only the constant 0 (or none) occurs.
    pub fn native_magnitude(&self) -> u32 {
        self.constants().iter().map(|c| c.bit_len()).max().unwrap_or(0)
    }

    pub fn is_elementary(&self) -> bool {
        self.formulas().all(|f| f.is_elementary())
    }
}

// ---------------------------------------------------------------------------
// printing

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) | Formula::ChOr(..) => 1,
        Formula::And(..) | Formula::ChAnd(..) => 2,
        _ => 4,
    }
}

fn print_into(f: &Formula, min: u8, out: &mut String) {
    let p = prec(f);
    let parens = p < min;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Atom(a) => {
            if !a.positive {
                out.push('~');
            }
            match &a.pred {
                Pred::Eq => {
                    out.push_str(&format!("{}={}", a.args[0], a.args[1]));
                }
                Pred::User(name) => {
                    out.push_str(name);
                    if !a.args.is_empty() {
                        out.push('(');
                        for (i, t) in a.args.iter().enumerate() {
                            if i > 0 {
                                out.push(',');
                            }
                            out.push_str(&t.to_string());
                        }
                        out.push(')');
                    }
                }
            }
        }
        Formula::And(a, b) => {
            print_into(a, 3, out);
            out.push_str(" /\\ ");
            print_into(b, 2, out);
        }
        Formula::ChAnd(a, b) => {
            print_into(a, 3, out);
            out.push_str(" & ");
            print_into(b, 2, out);
        }
        Formula::Or(a, b) => {
            print_into(a, 2, out);
            out.push_str(" \\/ ");
            print_into(b, 1, out);
        }
        Formula::ChOr(a, b) => {
            print_into(a, 2, out);
            out.push_str(" | ");
            print_into(b, 1, out);
        }
        Formula::All(x, a) => {
            out.push('A');
            out.push_str(x);
            out.push_str(": ");
            print_into(a, 4, out);
        }
        Formula::Ex(x, a) => {
            out.push('E');
            out.push_str(x);
            out.push_str(": ");
            print_into(a, 4, out);
        }
        Formula::ChAll(x, a) => {
            out.push('!');
            out.push_str(x);
            out.push_str(": ");
            print_into(a, 4, out);
        }
        Formula::ChEx(x, a) => {
            out.push('?');
            out.push_str(x);
            out.push_str(": ");
            print_into(a, 4, out);
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_into(self, 0, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.antecedent.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.antecedent.is_empty() {
            f.write_str("=> ")?;
        } else {
            f.write_str(" => ")?;
        }
        write!(f, "{}", self.succedent)
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Numeral(Constant),
    Tilde,
    ParAnd,  // /\
    ParOr,   // \/
    Arrow,   // ->
    ChAnd,   // &
    ChOr,    // |
    Bang,    // !
    Quest,   // ?
    LPar,
    RPar,
    Comma,
    Colon,
    Eq,
    Turnstile, // =>
    Top,       // T
    Bot,       // F
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => {
                toks.push((start, Tok::Tilde));
                i += 1;
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                toks.push((start, Tok::ParAnd));
                i += 2;
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                toks.push((start, Tok::ParOr));
                i += 2;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((start, Tok::Arrow));
                i += 2;
            }
            b'&' => {
                toks.push((start, Tok::ChAnd));
                i += 1;
            }
            b'|' => {
                toks.push((start, Tok::ChOr));
                i += 1;
            }
            b'!' => {
                toks.push((start, Tok::Bang));
                i += 1;
            }
            b'?' => {
                toks.push((start, Tok::Quest));
                i += 1;
            }
            b'(' => {
                toks.push((start, Tok::LPar));
                i += 1;
            }
            b')' => {
                toks.push((start, Tok::RPar));
                i += 1;
            }
            b',' => {
                toks.push((start, Tok::Comma));
                i += 1;
            }
            b':' => {
                toks.push((start, Tok::Colon));
                i += 1;
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((start, Tok::Turnstile));
                i += 2;
            }
            b'=' => {
                toks.push((start, Tok::Eq));
                i += 1;
            }
            b'0' | b'1' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j] == b'0' || bytes[j] == b'1') {
                    j += 1;
                }
                // a digit run followed by more alphanumerics is an identifier error
                if j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    return Err(ParseError {
                        position: start,
                        message: "identifier may not start with a digit".to_owned(),
                    });
                }
                let s = &text[i..j];
                let c = Constant::parse_numeral(s).ok_or(ParseError {
                    position: start,
                    message: format!("bad binary numeral {s}"),
                })?;
                toks.push((start, Tok::Numeral(c)));
                i = j;
            }
            b'T' if !next_is_ident_char(bytes, i + 1) => {
                toks.push((start, Tok::Top));
                i += 1;
            }
            b'F' if !next_is_ident_char(bytes, i + 1) => {
                toks.push((start, Tok::Bot));
                i += 1;
            }
            b'A' | b'E' if next_is_ident_start(bytes, i + 1) => {
                // quantifier keyword: A<var>: or E<var>:
                let blind_all = b == b'A';
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                let var = text[i + 1..j].to_owned();
                toks.push((
                    start,
                    if blind_all {
                        Tok::Ident(format!("\u{0}A{var}"))
                    } else {
                        Tok::Ident(format!("\u{0}E{var}"))
                    },
                ));
                i = j;
            }
            _ if b.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                toks.push((start, Tok::Ident(text[i..j].to_owned())));
                i = j;
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: text.len(),
    })
}

fn next_is_ident_char(bytes: &[u8], i: usize) -> bool {
    bytes
        .get(i)
        .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'\'')
}

fn next_is_ident_start(bytes: &[u8], i: usize) -> bool {
    bytes.get(i).is_some_and(|b| b.is_ascii_lowercase())
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn peek_pos(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError {
                position: self.peek_pos(),
                message: format!("expected {what}"),
            })
        }
    }
}

// raw tree before desugaring
enum Raw {
    Top,
    Bot,
    Atom(Pred, Vec<Term>),
    Not(Box<Raw>),
    Imp(Box<Raw>, Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    ChAnd(Box<Raw>, Box<Raw>),
    ChOr(Box<Raw>, Box<Raw>),
    All(String, Box<Raw>),
    Ex(String, Box<Raw>),
    ChAll(String, Box<Raw>),
    ChEx(String, Box<Raw>),
}

struct Parser {
    lx: Lexer,
    pred_arity: BTreeMap<String, usize>,
    fn_arity: BTreeMap<String, usize>,
}

impl Parser {
    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.lx.peek_pos(),
            message: message.to_owned(),
        })
    }

    fn formula(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.disj()?;
        if self.lx.peek() == Some(&Tok::Arrow) {
            self.lx.next();
            let rhs = self.formula()?;
            Ok(Raw::Imp(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.conj()?;
        match self.lx.peek() {
            Some(Tok::ParOr) => {
                self.lx.next();
                let rhs = self.disj_no_higher()?;
                Ok(Raw::Or(Box::new(lhs), Box::new(rhs)))
            }
            Some(Tok::ChOr) => {
                self.lx.next();
                let rhs = self.disj_no_higher()?;
                Ok(Raw::ChOr(Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    // right-assoc continuation of a disjunction chain
    fn disj_no_higher(&mut self) -> Result<Raw, ParseError> {
        self.disj()
    }

    fn conj(&mut self) -> Result<Raw, ParseError> {
        let lhs = self.unary()?;
        match self.lx.peek() {
            Some(Tok::ParAnd) => {
                self.lx.next();
                let rhs = self.conj()?;
                Ok(Raw::And(Box::new(lhs), Box::new(rhs)))
            }
            Some(Tok::ChAnd) => {
                self.lx.next();
                let rhs = self.conj()?;
                Ok(Raw::ChAnd(Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        match self.lx.peek().cloned() {
            Some(Tok::Tilde) => {
                self.lx.next();
                Ok(Raw::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Bang) => {
                self.lx.next();
                let v = self.var_colon()?;
                Ok(Raw::ChAll(v, Box::new(self.unary()?)))
            }
            Some(Tok::Quest) => {
                self.lx.next();
                let v = self.var_colon()?;
                Ok(Raw::ChEx(v, Box::new(self.unary()?)))
            }
            Some(Tok::Ident(s)) if s.starts_with('\u{0}') => {
                self.lx.next();
                let blind_all = s.as_bytes()[1] == b'A';
                let v = s[2..].to_owned();
                self.lx.expect(Tok::Colon, "`:` after quantified variable")?;
                let body = self.unary()?;
                Ok(if blind_all {
                    Raw::All(v, Box::new(body))
                } else {
                    Raw::Ex(v, Box::new(body))
                })
            }
            _ => self.primary(),
        }
    }

    fn var_colon(&mut self) -> Result<String, ParseError> {
        let v = match self.lx.next() {
            Some(Tok::Ident(s)) if !s.starts_with('\u{0}') => s,
            _ => return self.err("expected a variable"),
        };
        self.lx.expect(Tok::Colon, "`:` after quantified variable")?;
        Ok(v)
    }

    fn primary(&mut self) -> Result<Raw, ParseError> {
        match self.lx.peek().cloned() {
            Some(Tok::Top) => {
                self.lx.next();
                Ok(Raw::Top)
            }
            Some(Tok::Bot) => {
                self.lx.next();
                Ok(Raw::Bot)
            }
            Some(Tok::LPar) => {
                self.lx.next();
                let f = self.formula()?;
                self.lx.expect(Tok::RPar, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(_)) | Some(Tok::Numeral(_)) => {
                let t = self.term()?;
                if self.lx.peek() == Some(&Tok::Eq) {
                    self.lx.next();
                    let rhs = self.term()?;
                    return Ok(Raw::Atom(Pred::Eq, vec![t, rhs]));
                }
                // without `=`, the term must be a predicate atom
                match t {
                    Term::Var(name) => {
                        self.check_arity(&name, 0, true)?;
                        Ok(Raw::Atom(Pred::User(name), vec![]))
                    }
                    Term::App(name, args) => {
                        self.check_arity(&name, args.len(), true)?;
                        Ok(Raw::Atom(Pred::User(name), args))
                    }
                    Term::Const(_) => self.err("a bare numeral is not a formula"),
                }
            }
            _ => self.err("expected a formula"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.lx.next() {
            Some(Tok::Numeral(c)) => Ok(Term::Const(c)),
            Some(Tok::Ident(name)) if !name.starts_with('\u{0}') => {
                if self.lx.peek() == Some(&Tok::LPar) {
                    self.lx.next();
                    let mut args = Vec::new();
                    if self.lx.peek() != Some(&Tok::RPar) {
                        loop {
                            args.push(self.term()?);
                            if self.lx.peek() == Some(&Tok::Comma) {
                                self.lx.next();
                            } else {
                                break;
                            }
                        }
                    }
                    self.lx.expect(Tok::RPar, "`)`")?;
                    self.check_arity(&name, args.len(), false)?;
                    Ok(Term::App(name, args))
                } else {
                    Ok(Term::Var(name))
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn check_arity(&mut self, name: &str, n: usize, is_pred: bool) -> Result<(), ParseError> {
        let table = if is_pred {
            &mut self.pred_arity
        } else {
            &mut self.fn_arity
        };
        match table.get(name) {
            Some(&k) if k != n => Err(ParseError {
                position: self.lx.peek_pos(),
                message: format!(
                    "arity mismatch: {name} used with {n} argument(s) but earlier with {k}"
                ),
            }),
            Some(_) => Ok(()),
            None => {
                table.insert(name.to_owned(), n);
                Ok(())
            }
        }
    }
}

fn desugar(raw: Raw, positive: bool) -> Formula {
    match raw {
        Raw::Top => {
            if positive {
                Formula::Top
            } else {
                Formula::Bot
            }
        }
        Raw::Bot => {
            if positive {
                Formula::Bot
            } else {
                Formula::Top
            }
        }
        Raw::Atom(pred, args) => Formula::Atom(Atom {
            positive,
            pred,
            args,
        }),
        Raw::Not(a) => desugar(*a, !positive),
        Raw::Imp(a, b) => {
            let lhs = desugar(*a, !positive);
            let rhs = desugar(*b, positive);
            if positive {
                Formula::Or(Box::new(lhs), Box::new(rhs))
            } else {
                Formula::And(Box::new(lhs), Box::new(rhs))
            }
        }
        Raw::And(a, b) => {
            let (a, b) = (desugar(*a, positive), desugar(*b, positive));
            if positive {
                Formula::And(Box::new(a), Box::new(b))
            } else {
                Formula::Or(Box::new(a), Box::new(b))
            }
        }
        Raw::Or(a, b) => {
            let (a, b) = (desugar(*a, positive), desugar(*b, positive));
            if positive {
                Formula::Or(Box::new(a), Box::new(b))
            } else {
                Formula::And(Box::new(a), Box::new(b))
            }
        }
        Raw::ChAnd(a, b) => {
            let (a, b) = (desugar(*a, positive), desugar(*b, positive));
            if positive {
                Formula::ChAnd(Box::new(a), Box::new(b))
            } else {
                Formula::ChOr(Box::new(a), Box::new(b))
            }
        }
        Raw::ChOr(a, b) => {
            let (a, b) = (desugar(*a, positive), desugar(*b, positive));
            if positive {
                Formula::ChOr(Box::new(a), Box::new(b))
            } else {
                Formula::ChAnd(Box::new(a), Box::new(b))
            }
        }
        Raw::All(x, a) => {
            let body = Box::new(desugar(*a, positive));
            if positive {
                Formula::All(x, body)
            } else {
                Formula::Ex(x, body)
            }
        }
        Raw::Ex(x, a) => {
            let body = Box::new(desugar(*a, positive));
            if positive {
                Formula::Ex(x, body)
            } else {
                Formula::All(x, body)
            }
        }
        Raw::ChAll(x, a) => {
            let body = Box::new(desugar(*a, positive));
            if positive {
                Formula::ChAll(x, body)
            } else {
                Formula::ChEx(x, body)
            }
        }
        Raw::ChEx(x, a) => {
            let body = Box::new(desugar(*a, positive));
            if positive {
                Formula::ChEx(x, body)
            } else {
                Formula::ChAll(x, body)
            }
        }
    }
}

/// Renames binders clashing with `free` (the free variables of the enclosing
/// sequent) by appending apostrophes. Unclashed binders keep their names, so
/// graphically identical formulas stay identical — the Replicate rule depends
/// on that. Renames avoid capturing any existing binder of the formula.
fn rename_binders(f: &Formula, free: &BTreeSet<String>) -> Formula {
    let mut avoid: BTreeSet<String> = free.clone();
    avoid.append(&mut f.bound_vars());
    fn fresh(base: &str, free: &BTreeSet<String>, avoid: &BTreeSet<String>) -> String {
        let mut name = base.to_owned();
        loop {
            name.push('\'');
            if !free.contains(&name) && !avoid.contains(&name) {
                return name;
            }
        }
    }
    fn go(
        f: &Formula,
        subst: &BTreeMap<String, String>,
        free: &BTreeSet<String>,
        avoid: &mut BTreeSet<String>,
    ) -> Formula {
        match f {
            Formula::Top | Formula::Bot => f.clone(),
            Formula::Atom(a) => {
                let map: BTreeMap<String, Term> = subst
                    .iter()
                    .map(|(k, v)| (k.clone(), Term::Var(v.clone())))
                    .collect();
                Formula::Atom(Atom {
                    positive: a.positive,
                    pred: a.pred.clone(),
                    args: a.args.iter().map(|t| t.substitute(&map)).collect(),
                })
            }
            Formula::And(a, b) => Formula::And(
                Box::new(go(a, subst, free, avoid)),
                Box::new(go(b, subst, free, avoid)),
            ),
            Formula::Or(a, b) => Formula::Or(
                Box::new(go(a, subst, free, avoid)),
                Box::new(go(b, subst, free, avoid)),
            ),
            Formula::ChAnd(a, b) => Formula::ChAnd(
                Box::new(go(a, subst, free, avoid)),
                Box::new(go(b, subst, free, avoid)),
            ),
            Formula::ChOr(a, b) => Formula::ChOr(
                Box::new(go(a, subst, free, avoid)),
                Box::new(go(b, subst, free, avoid)),
            ),
            Formula::All(x, a) | Formula::Ex(x, a) | Formula::ChAll(x, a)
            | Formula::ChEx(x, a) => {
                let mut inner = subst.clone();
                let name = if free.contains(x) {
                    let name = fresh(x, free, avoid);
                    avoid.insert(name.clone());
                    inner.insert(x.clone(), name.clone());
                    name
                } else {
                    inner.remove(x);
                    x.clone()
                };
                let body = Box::new(go(a, &inner, free, avoid));
                match f {
                    Formula::All(..) => Formula::All(name, body),
                    Formula::Ex(..) => Formula::Ex(name, body),
                    Formula::ChAll(..) => Formula::ChAll(name, body),
                    _ => Formula::ChEx(name, body),
                }
            }
        }
    }
    go(f, &BTreeMap::new(), free, &mut avoid)
}

/// Parses a formula; sugar is eliminated and binders renamed as needed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        lx: lex(text)?,
        pred_arity: BTreeMap::new(),
        fn_arity: BTreeMap::new(),
    };
    let raw = p.formula()?;
    if p.lx.peek().is_some() {
        return p.err("trailing input");
    }
    let f = desugar(raw, true);
    let free: BTreeSet<String> = f.free_vars().into_iter().collect();
    Ok(rename_binders(&f, &free))
}

/// Parses a sequent `G1, ..., Gn => F`; a bare formula is accepted as the
/// empty-antecedent sequent.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser {
        lx: lex(text)?,
        pred_arity: BTreeMap::new(),
        fn_arity: BTreeMap::new(),
    };
    let mut formulas = Vec::new();
    let mut saw_turnstile = false;
    if p.lx.peek() == Some(&Tok::Turnstile) {
        p.lx.next();
        saw_turnstile = true;
        formulas.push(p.formula()?);
    } else {
        formulas.push(p.formula()?);
        loop {
            match p.lx.peek() {
                Some(Tok::Comma) => {
                    p.lx.next();
                    formulas.push(p.formula()?);
                }
                Some(Tok::Turnstile) => {
                    p.lx.next();
                    saw_turnstile = true;
                    formulas.push(p.formula()?);
                    break;
                }
                _ => break,
            }
        }
    }
    if p.lx.peek().is_some() {
        return p.err("trailing input");
    }
    if !saw_turnstile && formulas.len() > 1 {
        return p.err("expected `=>`");
    }
    let mut formulas: Vec<Formula> = formulas.into_iter().map(|r| desugar(r, true)).collect();
    let succedent = formulas.pop().unwrap();
    let raw = Sequent {
        antecedent: formulas,
        succedent,
    };
    let free: BTreeSet<String> = raw.free_vars().into_iter().collect();
    let antecedent = raw
        .antecedent
        .iter()
        .map(|g| rename_binders(g, &free))
        .collect();
    let succedent = rename_binders(&raw.succedent, &free);
    Ok(Sequent {
        antecedent,
        succedent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parses_choice_quantified_implication() {
        // the provable formula of the paper's quantifier-order example
        let got = f("!x: ?y: (p(x) -> p(y))");
        let want = Formula::ChAll(
            "x".into(),
            Box::new(Formula::ChEx(
                "y".into(),
                Box::new(Formula::Or(
                    Box::new(Formula::Atom(Atom {
                        positive: false,
                        pred: Pred::User("p".into()),
                        args: vec![Term::Var("x".into())],
                    })),
                    Box::new(Formula::Atom(Atom {
                        positive: true,
                        pred: Pred::User("p".into()),
                        args: vec![Term::Var("y".into())],
                    })),
                )),
            )),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn parses_nullary_connectives() {
        assert_eq!(f("T"), Formula::Top);
        assert_eq!(f("F"), Formula::Bot);
    }

    #[test]
    fn demorgan_on_parallel_conjunction() {
        assert_eq!(f("~(p /\\ q)"), f("~p \\/ ~q"));
    }

    #[test]
    fn demorgan_on_choice_and_quantifiers() {
        assert_eq!(f("~(p & q)"), f("~p | ~q"));
        assert_eq!(f("~ Ax: p(x)"), f("Ex: ~p(x)"));
        assert_eq!(f("~ !x: p(x)"), f("?x: ~p(x)"));
        assert_eq!(f("~~p"), f("p"));
    }

    #[test]
    fn implication_is_right_associative_and_lowest() {
        assert_eq!(f("p -> q -> r"), f("~p \\/ (~q \\/ r)"));
        assert_eq!(f("p /\\ q -> r"), f("(~p \\/ ~q) \\/ r"));
    }

    #[test]
    fn quantifiers_bind_tighter_than_conjunction() {
        assert_eq!(
            f("!x: p(x) /\\ q"),
            Formula::And(
                Box::new(f("!x: p(x)")),
                Box::new(f("q")),
            )
        );
    }

    #[test]
    fn numerals_reject_leading_zeros() {
        assert!(parse_formula("p(01)").is_err());
        assert!(parse_formula("10=10").is_ok());
    }

    #[test]
    fn arity_mismatch_is_reported() {
        assert!(parse_formula("p(x) /\\ p(x,y)").is_err());
        assert!(parse_formula("p(f(x)) /\\ p(f(x,y))").is_err());
    }

    #[test]
    fn bound_variable_clash_with_free_gets_renamed() {
        // free x in the left conjunct forces the binder to rename
        let got = f("p(x) /\\ !x: q(x)");
        assert_eq!(got, Formula::And(Box::new(f("p(x)")), Box::new(f("!x': q(x')"))));
    }

    #[test]
    fn repeated_binders_are_kept_identical() {
        // graphic identity across members matters for Replicate
        let got = f("!x: p(x) /\\ !x: q(x)");
        match &got {
            Formula::And(a, b) => {
                assert_eq!(**a, f("!x: p(x)"));
                assert_eq!(**b, f("!x: q(x)"));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "!x: ?y: (~p(x) \\/ p(y))",
            "(0=0 & 0=1) -> (10=11 & 10=10)",
            "Ax: (x3(x)=mul(mul(x,x),x)), !x: !y: ?z: (z=mul(x,y)) => !x: ?y: (y=x3(x))",
            "p | q | r",
            "(p | q) | r",
            "p /\\ q & r \\/ s",
            "?x: ~p(x) \\/ Ax: p(x)",
        ] {
            let seq = parse_sequent(s).unwrap();
            let printed = seq.to_string();
            let reparsed = parse_sequent(&printed).unwrap();
            assert_eq!(seq, reparsed, "round trip failed for {s}: printed {printed}");
        }
    }

    #[test]
    fn elementarize_replaces_choice_operators() {
        // the paper's unstable disjunction: ?x:~p(x) \/ Ax:p(x)
        let g = f("?x: ~p(x) \\/ Ax: p(x)");
        assert_eq!(elementarize(&g), f("F \\/ Ax: p(x)"));
        // elementary formulas are fixed points
        let e = f("Ax: (p(x) \\/ ~q(x))");
        assert_eq!(elementarize(&e), e);
        // outermost choice quantifier
        let h = f("!x: (even(x) | odd(x))");
        assert_eq!(elementarize(&h), Formula::Top);
        // idempotence
        assert_eq!(elementarize(&elementarize(&g)), elementarize(&g));
    }

    #[test]
    fn elementarize_sequent_examples() {
        let s = parse_sequent("p & q => (p & q) /\\ (p & q)").unwrap();
        assert_eq!(elementarize_sequent(&s), f("~T \\/ T /\\ T"));
        let s = parse_sequent("=> p").unwrap();
        assert_eq!(elementarize_sequent(&s), f("p"));
        // line 1 of the cube proof
        let s = parse_sequent(
            "Ax: (cube(x)=mul(mul(x,x),x)), t=mul(s,s), r=mul(t,s) => r=cube(s)",
        )
        .unwrap();
        let el = elementarize_sequent(&s);
        assert!(el.is_elementary());
        assert_eq!(
            el,
            f("~(Ax: (cube(x)=mul(mul(x,x),x)) /\\ t=mul(s,s) /\\ r=mul(t,s)) \\/ r=cube(s)")
        );
    }

    #[test]
    fn substitution_examples() {
        // choosing 10 for x in ?y:(y=cube(x))
        let g = f("?y: (y=cube(x))");
        let got = substitute_const(&g, "x", Constant(2));
        assert_eq!(got, f("?y: (y=cube(10))"));
        // no free occurrence: unchanged
        let h = f("!x: p(x)");
        assert_eq!(substitute_const(&h, "x", Constant(1)), h);
        // fresh variable replacement
        let k = f("p(x,y)");
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Term::Var("y'".to_string()));
        assert_eq!(substitute(&k, &m).unwrap(), f("p(y',y)"));
        // capture is an error
        let c = f("?y: p(x,y)");
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), Term::Var("y".to_string()));
        assert!(substitute(&c, &m).is_err());
    }

    #[test]
    fn disjoint_substitutions_commute() {
        let g = f("p(x,y) \\/ ?z: q(x,z)");
        let mut mx = BTreeMap::new();
        mx.insert("x".to_string(), Term::Const(Constant(1)));
        let mut my = BTreeMap::new();
        my.insert("y".to_string(), Term::Const(Constant(2)));
        let a = substitute(&substitute(&g, &mx).unwrap(), &my).unwrap();
        let b = substitute(&substitute(&g, &my).unwrap(), &mx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn native_magnitude_examples() {
        let cube = parse_sequent(
            "Ax: (cube(x)=mul(mul(x,x),x)), !x: !y: ?z: (z=mul(x,y)) => !x: ?y: (y=cube(x))",
        )
        .unwrap();
        assert_eq!(cube.native_magnitude(), 0);
        let s = parse_sequent("=> p(10)").unwrap();
        assert_eq!(s.native_magnitude(), 2);
        let s = parse_sequent("=> p(0) /\\ p(1)").unwrap();
        assert_eq!(s.native_magnitude(), 1);
    }

    #[test]
    fn free_vars_lexicographic() {
        assert!(f("!x: ?y: (y=cube(x))").free_vars().is_empty());
        assert_eq!(f("p(x) /\\ q(z,y)").free_vars(), vec!["x", "y", "z"]);
        let line1 = parse_sequent(
            "Ax: (cube(x)=mul(mul(x,x),x)), t=mul(s,s), r=mul(t,s) => r=cube(s)",
        )
        .unwrap();
        assert_eq!(line1.free_vars(), vec!["r", "s", "t"]);
    }

    #[test]
    fn surface_occurrence_scope() {
        let g = f("p /\\ (q & r)");
        assert_eq!(surface_occurrences(&g, ChoiceKind::ChAnd), vec![vec![1]]);
        let h = f("!x: (p(x) | q(x))");
        assert!(surface_occurrences(&h, ChoiceKind::ChOr).is_empty());
        let k = f("!x: ?y: (y=x)");
        assert_eq!(surface_occurrences(&k, ChoiceKind::ChAll), vec![Vec::<u8>::new()]);
        // blind quantifiers do not close the surface
        let m = f("Ax: (p(x) | q(x))");
        assert_eq!(surface_occurrences(&m, ChoiceKind::ChOr), vec![vec![0]]);
    }

    #[test]
    fn constant_display_and_bit_len() {
        assert_eq!(Constant(0).to_string(), "0");
        assert_eq!(Constant(0).bit_len(), 0);
        assert_eq!(Constant(8).to_string(), "1000");
        assert_eq!(Constant(8).bit_len(), 4);
        assert_eq!(Constant::parse_numeral("1000"), Some(Constant(8)));
        assert_eq!(Constant::parse_numeral("0"), Some(Constant(0)));
        assert_eq!(Constant::parse_numeral("01"), None);
        assert_eq!(Constant::parse_numeral(""), None);
    }
}
