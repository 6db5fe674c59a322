//! Free-algebra expressions with explicit association and a small rewrite
//! system for associator identities.
//!
//! An expression is a rational linear combination of terms. A term is a
//! product of commuting scalar symbols (`δ^{ab}`, `δ³(x−y)`) times an atom.
//! Atoms are generators, binary products that keep their parenthesization,
//! commutators and associators. Nothing reassociates unless a rule says so.
//!
//! Rules:
//! * `R1` canonical commutation: `Φ⁽ᵃ⁾(x)Π⁽ᵇ⁾†(y) → Π⁽ᵇ⁾†(y)Φ⁽ᵃ⁾(x) + i δ^{ab} δ³(x−y)`,
//!   and the ladder analogues without the unit `i`.
//! * `R2` alternating associator: permuting arguments multiplies by the sign.
//! * `R3` Moufang identities (listed; the chains below never need them).
//! * `R4` quaternion unit table, `[i, j] = 2k`.
//! * `R5` scalars commute and associate; multilinearity of `[·,·]` and `(·,·,·)`.
//! * `A` the axiom `(x, y, u) = [xy, u]` for a quaternion unit `u`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;

use crate::fock::{annihilation, build_fock, FockError, ModeEntry, ModeId, ModeTable, Scheme, Species};
use crate::four_vector::FourVector;
use crate::quaternion::Quaternion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Index {
    Sym(char),
    Num(u8),
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Sym(c) => write!(f, "{c}"),
            Index::Num(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Phi,
    Pi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderKind {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unit {
    I,
    J,
    K,
}

impl Unit {
    fn position(self) -> usize {
        match self {
            Unit::I => 0,
            Unit::J => 1,
            Unit::K => 2,
        }
    }

    fn from_position(p: usize) -> Unit {
        [Unit::I, Unit::J, Unit::K][p]
    }

    /// `uv = sign · w`, or `uu = −1` (returned as `(−1, None)`).
    pub fn product(self, other: Unit) -> (i64, Option<Unit>) {
        if self == other {
            return (-1, None);
        }
        let (a, b) = (self.position(), other.position());
        let c = 3 - a - b;
        let sign = if (a + 1) % 3 == b { 1 } else { -1 };
        (sign, Some(Unit::from_position(c)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Field { kind: FieldKind, dagger: bool, comp: Index, point: char },
    Ladder { kind: LadderKind, dagger: bool, comp: Index },
    Unit(Unit),
}

impl Generator {
    pub fn phi(comp: Index, point: char) -> Self {
        Generator::Field { kind: FieldKind::Phi, dagger: false, comp, point }
    }

    pub fn pi_dagger(comp: Index, point: char) -> Self {
        Generator::Field { kind: FieldKind::Pi, dagger: true, comp, point }
    }

    pub fn ladder(kind: LadderKind, dagger: bool, comp: Index) -> Self {
        Generator::Ladder { kind, dagger, comp }
    }

    fn as_unit(&self) -> Option<Unit> {
        match self {
            Generator::Unit(u) => Some(*u),
            _ => None,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dag = |d: bool| if d { "†" } else { "" };
        match self {
            Generator::Field { kind, dagger, comp, point } => {
                let sym = match kind {
                    FieldKind::Phi => "Φ",
                    FieldKind::Pi => "Π",
                };
                write!(f, "{sym}^({comp}){}({point})", dag(*dagger))
            }
            Generator::Ladder { kind, dagger, comp } => {
                let sym = match kind {
                    LadderKind::A => "â",
                    LadderKind::B => "b̂",
                };
                write!(f, "{sym}^({comp}){}", dag(*dagger))
            }
            Generator::Unit(u) => f.write_str(match u {
                Unit::I => "i",
                Unit::J => "j",
                Unit::K => "k",
            }),
        }
    }
}

/// Commuting scalar symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Kronecker(Index, Index),
    DiracDelta(char, char),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Kronecker(a, b) => write!(f, "δ^{{{a}{b}}}"),
            Scalar::DiracDelta(x, y) => write!(f, "δ³({x}−{y})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Gen(Generator),
    /// `(lhs)(rhs)` with the association fixed.
    Mul(Box<Atom>, Box<Atom>),
    Comm(Box<SymExpr>, Box<SymExpr>),
    Assoc(Box<SymExpr>, Box<SymExpr>, Box<SymExpr>),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(g) => write!(f, "{g}"),
            Atom::Mul(a, b) => {
                for side in [a, b] {
                    if matches!(**side, Atom::Mul(..)) {
                        write!(f, "({side})")?;
                    } else {
                        write!(f, "{side}")?;
                    }
                }
                Ok(())
            }
            Atom::Comm(x, y) => write!(f, "[{x}, {y}]"),
            Atom::Assoc(x, y, z) => write!(f, "({x}, {y}, {z})"),
        }
    }
}

/// Scalar symbols times an optional atom; `None` is the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    scalars: Vec<Scalar>,
    atom: Option<Atom>,
}

impl Term {
    pub fn scalars(&self) -> &[Scalar] {
        &self.scalars
    }

    pub fn atom(&self) -> Option<&Atom> {
        self.atom.as_ref()
    }
}

/// A rational linear combination of terms with canonical term order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymExpr {
    terms: BTreeMap<Term, Rational64>,
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

impl SymExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::number(rat(1))
    }

    pub fn number(c: Rational64) -> Self {
        Self::from_term(Term { scalars: Vec::new(), atom: None }, c)
    }

    pub fn gen(g: Generator) -> Self {
        Self::atom(Atom::Gen(g))
    }

    pub fn unit(u: Unit) -> Self {
        Self::gen(Generator::Unit(u))
    }

    pub fn atom(a: Atom) -> Self {
        Self::from_term(Term { scalars: Vec::new(), atom: Some(a) }, rat(1))
    }

    /// `δ^{ab}`; numeric pairs and repeated symbols evaluate to 0 or 1.
    pub fn kronecker(a: Index, b: Index) -> Self {
        match (a, b) {
            (Index::Num(x), Index::Num(y)) => Self::number(rat((x == y) as i64)),
            _ if a == b => Self::one(),
            _ => Self::scalar(Scalar::Kronecker(a.min(b), a.max(b))),
        }
    }

    /// `δ³(x−y)`
    pub fn dirac(x: char, y: char) -> Self {
        Self::scalar(Scalar::DiracDelta(x, y))
    }

    pub fn scalar(s: Scalar) -> Self {
        Self::from_term(Term { scalars: vec![s], atom: None }, rat(1))
    }

    fn from_term(t: Term, c: Rational64) -> Self {
        let mut terms = BTreeMap::new();
        if c != rat(0) {
            terms.insert(t, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Rational64)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: Rational64) -> Self {
        if c == rat(0) {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(t, v)| (t.clone(), *v * c)).collect() }
    }

    fn add_term(&mut self, t: Term, c: Rational64) {
        let entry = self.terms.entry(t).or_insert(rat(0));
        *entry += c;
        if *entry == rat(0) {
            self.terms.retain(|_, v| *v != rat(0));
        }
    }

    /// Product that keeps association: scalars merge, atoms pair into a `Mul` node.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut scalars = a.scalars.clone();
                scalars.extend_from_slice(&b.scalars);
                scalars.sort();
                let atom = match (&a.atom, &b.atom) {
                    (None, x) | (x, None) => x.clone(),
                    (Some(x), Some(y)) => Some(Atom::Mul(Box::new(x.clone()), Box::new(y.clone()))),
                };
                out.add_term(Term { scalars, atom }, *ca * *cb);
            }
        }
        out
    }

    /// The single atom of an expression `1·atom`, if that is its whole content.
    pub fn as_single_atom(&self) -> Option<&Atom> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((t, c)), None) if *c == rat(1) && t.scalars.is_empty() => t.atom.as_ref(),
            _ => None,
        }
    }

    fn as_unit(&self) -> Option<Unit> {
        match self.as_single_atom() {
            Some(Atom::Gen(g)) => g.as_unit(),
            _ => None,
        }
    }

    /// Coefficient of a bare atom (no scalars).
    pub fn coefficient_of(&self, atom: &Atom) -> Rational64 {
        let key = Term { scalars: Vec::new(), atom: Some(atom.clone()) };
        self.terms.get(&key).copied().unwrap_or(rat(0))
    }
}

/// Unreduced commutator node `[x, y]`.
pub fn comm(x: &SymExpr, y: &SymExpr) -> SymExpr {
    SymExpr::atom(Atom::Comm(Box::new(x.clone()), Box::new(y.clone())))
}

/// Unreduced associator node `(x, y, z)`.
pub fn assoc(x: &SymExpr, y: &SymExpr, z: &SymExpr) -> SymExpr {
    SymExpr::atom(Atom::Assoc(Box::new(x.clone()), Box::new(y.clone()), Box::new(z.clone())))
}

/// `x(yz) − (xy)z` as a two-term tree.
pub fn sym_associator(x: &SymExpr, y: &SymExpr, z: &SymExpr) -> SymExpr {
    &x.product(&y.product(z)) - &x.product(y).product(z)
}

impl Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, o: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (t, c) in &o.terms {
            out.add_term(t.clone(), *c);
        }
        out
    }
}

impl Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, o: &SymExpr) -> SymExpr {
        self + &(-o)
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        self.scale(rat(-1))
    }
}

impl Mul for &SymExpr {
    type Output = SymExpr;
    fn mul(self, o: &SymExpr) -> SymExpr {
        self.product(o)
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (t, c)) in self.terms.iter().enumerate() {
            let negative = *c < rat(0);
            match (n, negative) {
                (0, true) => f.write_str("−")?,
                (0, false) => {}
                (_, true) => f.write_str(" − ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = if negative { -*c } else { *c };
            let mut parts: Vec<String> = Vec::new();
            let bare = t.scalars.is_empty() && t.atom.is_none();
            if mag != rat(1) || bare {
                parts.push(mag.to_string());
            }
            let unit_atom = matches!(&t.atom, Some(Atom::Gen(Generator::Unit(_))));
            if unit_atom {
                parts.push(t.atom.as_ref().expect("checked").to_string());
            }
            parts.extend(t.scalars.iter().map(ToString::to_string));
            if let (false, Some(a)) = (unit_atom, &t.atom) {
                parts.push(a.to_string());
            }
            // Scalars and a following non-unit atom are juxtaposed, as in δ[i, j].
            let mut text = String::new();
            for (i, p) in parts.iter().enumerate() {
                let glue = i > 0 && !(i == parts.len() - 1 && !unit_atom && t.atom.is_some() && !t.scalars.is_empty());
                if glue {
                    text.push(' ');
                }
                text.push_str(p);
            }
            f.write_str(&text)?;
        }
        Ok(())
    }
}

/// Rewrites every atom for which `rule` fires, outermost first, rebuilding the
/// rest of the tree unchanged.
fn rewrite(expr: &SymExpr, rule: &dyn Fn(&Atom) -> Option<SymExpr>) -> SymExpr {
    let mut out = SymExpr::zero();
    for (t, c) in &expr.terms {
        let base = SymExpr::from_term(Term { scalars: t.scalars.clone(), atom: None }, *c);
        let body = match &t.atom {
            None => SymExpr::one(),
            Some(a) => rewrite_atom(a, rule),
        };
        out = &out + &base.product(&body);
    }
    out
}

fn rewrite_atom(atom: &Atom, rule: &dyn Fn(&Atom) -> Option<SymExpr>) -> SymExpr {
    if let Some(r) = rule(atom) {
        return r;
    }
    match atom {
        Atom::Gen(_) => SymExpr::atom(atom.clone()),
        Atom::Mul(a, b) => rewrite_atom(a, rule).product(&rewrite_atom(b, rule)),
        Atom::Comm(x, y) => comm(&rewrite(x, rule), &rewrite(y, rule)),
        Atom::Assoc(x, y, z) => assoc(&rewrite(x, rule), &rewrite(y, rule), &rewrite(z, rule)),
    }
}

/// Multilinear expansion of bracket nodes; any scalar argument kills the node.
fn multilinear(args: &[SymExpr], build: &dyn Fn(&[Atom]) -> Atom) -> SymExpr {
    let mut acc: Vec<(Vec<Scalar>, Vec<Atom>, Rational64)> = vec![(Vec::new(), Vec::new(), rat(1))];
    for arg in args {
        let mut next = Vec::new();
        for (scalars, atoms, c) in &acc {
            for (t, ct) in &arg.terms {
                let Some(a) = &t.atom else { continue };
                let mut s = scalars.clone();
                s.extend_from_slice(&t.scalars);
                let mut at = atoms.clone();
                at.push(a.clone());
                next.push((s, at, *c * *ct));
            }
        }
        acc = next;
    }
    let mut out = SymExpr::zero();
    for (mut scalars, atoms, c) in acc {
        scalars.sort();
        out.add_term(Term { scalars, atom: Some(build(&atoms)) }, c);
    }
    out
}

fn single(a: &Atom) -> Box<SymExpr> {
    Box::new(SymExpr::atom(a.clone()))
}

fn rule_linearity(atom: &Atom) -> Option<SymExpr> {
    match atom {
        Atom::Comm(x, y) => {
            let args = [linearize(x), linearize(y)];
            Some(multilinear(&args, &|a| Atom::Comm(single(&a[0]), single(&a[1]))))
        }
        Atom::Assoc(x, y, z) => {
            let args = [linearize(x), linearize(y), linearize(z)];
            Some(multilinear(&args, &|a| Atom::Assoc(single(&a[0]), single(&a[1]), single(&a[2]))))
        }
        _ => None,
    }
}

/// `R5`: expand brackets multilinearly and pull scalars out.
pub fn linearize(expr: &SymExpr) -> SymExpr {
    rewrite(expr, &rule_linearity)
}

fn unit_product(u: Unit, v: Unit) -> SymExpr {
    match u.product(v) {
        (s, Some(w)) => SymExpr::unit(w).scale(rat(s)),
        (s, None) => SymExpr::number(rat(s)),
    }
}

fn rule_units(atom: &Atom) -> Option<SymExpr> {
    match atom {
        Atom::Mul(a, b) => match (&**a, &**b) {
            (Atom::Gen(Generator::Unit(u)), Atom::Gen(Generator::Unit(v))) => Some(unit_product(*u, *v)),
            _ => None,
        },
        Atom::Comm(x, y) => {
            let (u, v) = (x.as_unit()?, y.as_unit()?);
            Some(&unit_product(u, v) - &unit_product(v, u))
        }
        Atom::Assoc(x, y, z) => {
            x.as_unit()?;
            y.as_unit()?;
            z.as_unit()?;
            Some(SymExpr::zero())
        }
        _ => None,
    }
}

/// `R4` to a fixed point.
pub fn apply_unit_table(expr: &SymExpr) -> SymExpr {
    let mut cur = expr.clone();
    loop {
        let next = rewrite(&cur, &rule_units);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `R4` and `R5` alternately until nothing changes.
pub fn reduce(expr: &SymExpr) -> SymExpr {
    let mut cur = expr.clone();
    loop {
        let next = apply_unit_table(&linearize(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `R1` for an adjacent pair, moving the daggered factor to the left.
fn ccr_swap(x: &Generator, y: &Generator) -> Option<SymExpr> {
    let swapped = SymExpr::gen(*y).product(&SymExpr::gen(*x));
    match (*x, *y) {
        (
            Generator::Field { kind: FieldKind::Phi, dagger: false, comp: a, point: p },
            Generator::Field { kind: FieldKind::Pi, dagger: true, comp: b, point: q },
        )
        | (
            Generator::Field { kind: FieldKind::Phi, dagger: true, comp: a, point: p },
            Generator::Field { kind: FieldKind::Pi, dagger: false, comp: b, point: q },
        ) => {
            let c = SymExpr::unit(Unit::I)
                .product(&SymExpr::kronecker(a, b))
                .product(&SymExpr::dirac(p, q));
            Some(&swapped + &c)
        }
        (
            Generator::Ladder { kind: k1, dagger: false, comp: a },
            Generator::Ladder { kind: k2, dagger: true, comp: b },
        ) => {
            if k1 == k2 {
                Some(&swapped + &SymExpr::kronecker(a, b))
            } else {
                Some(swapped)
            }
        }
        // Different species commute, so the swap is free in either order.
        (
            Generator::Ladder { kind: k1, dagger: true, .. },
            Generator::Ladder { kind: k2, dagger: false, .. },
        ) if k1 != k2 => Some(swapped),
        _ => None,
    }
}

fn rule_ccr(atom: &Atom) -> Option<SymExpr> {
    match atom {
        Atom::Mul(a, b) => match (&**a, &**b) {
            (Atom::Gen(x), Atom::Gen(y)) => ccr_swap(x, y),
            _ => None,
        },
        _ => None,
    }
}

fn rule_axiom(atom: &Atom) -> Option<SymExpr> {
    match atom {
        Atom::Assoc(x, y, u) => {
            u.as_unit()?;
            Some(comm(&x.product(y), u))
        }
        _ => None,
    }
}

fn rule_reverse_axiom(atom: &Atom) -> Option<SymExpr> {
    match atom {
        Atom::Comm(xy, u) => {
            u.as_unit()?;
            match xy.as_single_atom()? {
                Atom::Mul(a, b) => Some(assoc(&SymExpr::atom((**a).clone()), &SymExpr::atom((**b).clone()), u)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Sorts associator arguments with the permutation sign; repeated arguments give 0.
fn rule_alternating(atom: &Atom) -> Option<SymExpr> {
    let Atom::Assoc(x, y, z) = atom else { return None };
    let mut args = [x.as_single_atom()?.clone(), y.as_single_atom()?.clone(), z.as_single_atom()?.clone()];
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            if args[j] > args[j + 1] {
                args.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if args[0] == args[1] || args[1] == args[2] {
        return Some(SymExpr::zero());
    }
    if sign == 1 && args[0] == *x.as_single_atom()? && args[1] == *y.as_single_atom()? {
        return None;
    }
    Some(assoc(&SymExpr::atom(args[0].clone()), &SymExpr::atom(args[1].clone()), &SymExpr::atom(args[2].clone())).scale(rat(sign)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    Ccr,
    Linearity,
    ReverseAxiom,
    Alternating,
    Moufang,
    UnitTable,
    Solve,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Axiom => "A",
            Rule::Ccr => "R1",
            Rule::Alternating => "R2",
            Rule::Moufang => "R3",
            Rule::UnitTable => "R4",
            Rule::Linearity => "R5",
            Rule::ReverseAxiom => "A⁻¹",
            Rule::Solve => "solve",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom (x, y, u) = [xy, u]",
            Rule::Ccr => "canonical commutation, daggered factor moved left",
            Rule::Linearity => "multilinearity, scalars pulled out",
            Rule::ReverseAxiom => "axiom read backwards, [xy, u] = (x, y, u)",
            Rule::Alternating => "alternating associator, sign of the permutation",
            Rule::Moufang => "Moufang identities",
            Rule::UnitTable => "quaternion unit table, [i, j] = 2k",
            Rule::Solve => "collect the associator on one side and solve",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub before: String,
    pub after: String,
    pub note: Option<String>,
}

/// The chain `lhs = …` with each rule application recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTrace {
    pub lhs: String,
    pub steps: Vec<Step>,
    pub result: SymExpr,
}

impl ProofTrace {
    pub fn final_form(&self) -> String {
        self.result.to_string()
    }

    /// Indented text, one rule per block.
    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.lhs);
        for s in &self.steps {
            out.push_str(&format!("  [{}] {}\n", s.rule.label(), s.rule.description()));
            out.push_str(&format!("    = {}\n", s.after));
            if let Some(n) = &s.note {
                out.push_str(&format!("    note: {n}\n"));
            }
        }
        out.push_str(&format!("{} = {}\n", self.lhs, self.final_form()));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainError {
    ChainBroken { rule: Rule, detail: String },
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainError::ChainBroken { rule, detail } => {
                write!(f, "chain broken at {} ({}): {detail}", rule.label(), rule.description())
            }
        }
    }
}

struct Chain {
    rhs: SymExpr,
    steps: Vec<Step>,
    strict: bool,
}

impl Chain {
    fn apply(&mut self, rule: Rule, f: &dyn Fn(&SymExpr) -> SymExpr) -> Result<(), ChainError> {
        let next = f(&self.rhs);
        if next == self.rhs {
            if self.strict {
                return Err(ChainError::ChainBroken { rule, detail: format!("no match in {}", self.rhs) });
            }
            return Ok(());
        }
        self.steps.push(Step { rule, before: self.rhs.to_string(), after: next.to_string(), note: None });
        self.rhs = next;
        Ok(())
    }
}

/// Runs `(x, y, u) = [xy, u] → R1 → R5 → A⁻¹ → R2 → R4 → solve`.
///
/// In strict mode every step must rewrite something.
fn run_chain(x: &SymExpr, y: &SymExpr, u: &SymExpr, strict: bool) -> Result<ProofTrace, ChainError> {
    let start = assoc(x, y, u);
    let lhs = start.to_string();
    let mut chain = Chain { rhs: start.clone(), steps: Vec::new(), strict: false };

    // A scalar argument, or arguments out of canonical order, are handled before the chain.
    chain.apply(Rule::Linearity, &linearize)?;
    if chain.rhs.is_zero() {
        return Ok(ProofTrace { lhs, steps: chain.steps, result: SymExpr::zero() });
    }
    chain.apply(Rule::Alternating, &|e| rewrite(e, &rule_alternating))?;
    if chain.rhs.is_zero() {
        return Ok(ProofTrace { lhs, steps: chain.steps, result: SymExpr::zero() });
    }
    let (outer_sign, target) = match chain.rhs.terms.iter().next() {
        Some((Term { scalars, atom: Some(a @ Atom::Assoc(..)) }, c)) if scalars.is_empty() && chain.rhs.terms.len() == 1 => {
            (*c, a.clone())
        }
        _ => {
            return Err(ChainError::ChainBroken {
                rule: Rule::Alternating,
                detail: format!("expected a single associator, got {}", chain.rhs),
            })
        }
    };
    chain.rhs = SymExpr::atom(target.clone());
    chain.strict = strict;

    chain.apply(Rule::Axiom, &|e| rewrite(e, &rule_axiom))?;
    chain.apply(Rule::Ccr, &|e| rewrite(e, &rule_ccr))?;
    chain.apply(Rule::Linearity, &linearize)?;
    chain.apply(Rule::ReverseAxiom, &|e| rewrite(e, &rule_reverse_axiom))?;
    chain.apply(Rule::Alternating, &|e| rewrite(e, &rule_alternating))?;
    chain.apply(Rule::UnitTable, &apply_unit_table)?;

    let c = chain.rhs.coefficient_of(&target);
    if c == rat(1) {
        return Err(ChainError::ChainBroken {
            rule: Rule::Solve,
            detail: format!("identity {} = {} leaves the associator undetermined", SymExpr::atom(target), chain.rhs),
        });
    }
    let rest = &chain.rhs - &SymExpr::atom(target.clone()).scale(c);
    let solved = rest.scale(rat(1) / (rat(1) - c));
    let target_text = SymExpr::atom(target.clone()).to_string();
    let note = format!(
        "{} = {}; moving the associator to the left gives {} {} = {}",
        target_text,
        chain.rhs,
        rat(1) - c,
        target_text,
        rest
    );
    chain.steps.push(Step {
        rule: Rule::Solve,
        before: chain.rhs.to_string(),
        after: solved.to_string(),
        note: Some(note),
    });
    Ok(ProofTrace { lhs, steps: chain.steps, result: solved.scale(outer_sign) })
}

/// The expected final form `k δ^{ab} δ³(x−y)`.
pub fn expected_normal_form() -> SymExpr {
    SymExpr::unit(Unit::K)
        .product(&SymExpr::kronecker(Index::Sym('a'), Index::Sym('b')))
        .product(&SymExpr::dirac('x', 'y'))
}

/// Associator `(Φ⁽ᵃ⁾(x), Π⁽ᵇ⁾†(y), u)` for arbitrary components and third argument.
pub fn field_associator_chain(a: Index, b: Index, u: &SymExpr) -> Result<ProofTrace, ChainError> {
    let phi = SymExpr::gen(Generator::phi(a, 'x'));
    let pi = SymExpr::gen(Generator::pi_dagger(b, 'y'));
    run_chain(&phi, &pi, u, false)
}

/// The full chain for `(Φ⁽ᵃ⁾(x), Π⁽ᵇ⁾†(y), j)`, ending in `k δ^{ab} δ³(x−y)`.
pub fn verify_associator_chain() -> Result<ProofTrace, ChainError> {
    let phi = SymExpr::gen(Generator::phi(Index::Sym('a'), 'x'));
    let pi = SymExpr::gen(Generator::pi_dagger(Index::Sym('b'), 'y'));
    let trace = run_chain(&phi, &pi, &SymExpr::unit(Unit::J), true)?;
    if trace.result != expected_normal_form() {
        return Err(ChainError::ChainBroken {
            rule: Rule::Solve,
            detail: format!("final form {} differs from {}", trace.result, expected_normal_form()),
        });
    }
    Ok(trace)
}

/// Associator of two ladder generators with `j`.
pub fn ladder_associator_chain(x: Generator, y: Generator) -> Result<ProofTrace, ChainError> {
    run_chain(&SymExpr::gen(x), &SymExpr::gen(y), &SymExpr::unit(Unit::J), false)
}

/// `(â⁽ᵃ⁾, â⁽ᵇ⁾†, j)`, which vanishes since the ladder commutator carries no unit.
pub fn ladder_associator_check() -> Result<SymExpr, ChainError> {
    let a = Generator::ladder(LadderKind::A, false, Index::Sym('a'));
    let ad = Generator::ladder(LadderKind::A, true, Index::Sym('b'));
    Ok(ladder_associator_chain(a, ad)?.result)
}

/// `(A, A†, J)` for one truncated ladder with quaternion entries, `J = j·1`.
///
/// Matrices over ℍ multiply associatively, so every entry is exactly zero.
pub fn numeric_ladder_associator(n_max: u32) -> Result<Vec<Quaternion>, FockError> {
    let rest = ModeEntry { index: 1, species: Species::Particle, momentum: FourVector::new(1.0, 0.0, 0.0, 0.0) };
    let table = ModeTable::new(1.0, Scheme::FourComponent, vec![rest])?;
    let fs = build_fock(table, n_max)?;
    let dim = fs.dim();
    let lower = annihilation(&fs, ModeId(0))?;
    let dense = |f: &dyn Fn(usize, usize) -> Quaternion| -> Vec<Quaternion> {
        (0..dim * dim).map(|i| f(i / dim, i % dim)).collect()
    };
    let a = dense(&|r, c| Quaternion::from_complex(lower.get(r, c)));
    let ad = dense(&|r, c| Quaternion::from_complex(lower.get(c, r).conj()));
    let j = dense(&|r, c| if r == c { Quaternion::J } else { Quaternion::ZERO });
    let matmul = |x: &[Quaternion], y: &[Quaternion]| -> Vec<Quaternion> {
        dense(&|r, c| (0..dim).fold(Quaternion::ZERO, |acc, k| acc + x[r * dim + k] * y[k * dim + c]))
    };
    let left = matmul(&a, &matmul(&ad, &j));
    let right = matmul(&matmul(&a, &ad), &j);
    Ok(left.iter().zip(&right).map(|(l, r)| *l - *r).collect())
}
