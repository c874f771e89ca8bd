//! Terms of a computad: `var v` or `f[τ]` with `τ` indexed by arity cells.
//!
//! Terms are generic in the type of their variables so the same machinery
//! serves computads, free computads on presheaves and the terminal computad.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{name, Arrow, DirectCategory, Name};
use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term<V = Name> {
    Var(V),
    /// Symbol id and arguments in the flat cell order of the symbol's arity.
    App(Name, Arc<[Term<V>]>),
}

impl<V: fmt::Display> fmt::Display for Term<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                write!(f, "{s}[")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl<V: fmt::Display> fmt::Debug for Term<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<V: Clone> Term<V> {
    pub fn var(v: V) -> Self {
        Term::Var(v)
    }

    pub fn app(symbol: Name, args: Vec<Term<V>>) -> Self {
        Term::App(symbol, args.into())
    }

    pub fn as_var(&self) -> Option<&V> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    /// Substitution: replaces every variable by a term.
    pub fn bind<W, E>(&self, f: &mut dyn FnMut(&V) -> Result<Term<W>, E>) -> Result<Term<W>, E> {
        match self {
            Term::Var(v) => f(v),
            Term::App(s, args) => {
                let args = args.iter().map(|a| a.bind(f)).collect::<Result<Vec<_>, E>>()?;
                Ok(Term::App(s.clone(), args.into()))
            }
        }
    }

    pub fn map_vars<W>(&self, f: &mut dyn FnMut(&V) -> W) -> Term<W> {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// `0` for variables and `1 + max` over all arguments otherwise.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn for_each_var(&self, f: &mut dyn FnMut(&V)) {
        match self {
            Term::Var(v) => f(v),
            Term::App(_, args) => args.iter().for_each(|a| a.for_each_var(f)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

/// Anything terms can live over: a signature plus typed generators with gluings.
pub trait Context {
    type Gen: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display;

    fn signature(&self) -> &Signature;

    fn gen_sort(&self, g: &Self::Gen) -> Result<usize>;

    /// `φ_δ(g)` for a non-identity face `δ` into the sort of `g`.
    fn gluing(&self, g: &Self::Gen, face: usize) -> Result<Term<Self::Gen>>;
}

/// Contexts with finitely many, enumerable generators.
pub trait FiniteContext: Context {
    fn generators(&self, sort: usize) -> Vec<Self::Gen>;
}

impl<C: Context + ?Sized> Context for &C {
    type Gen = C::Gen;
    fn signature(&self) -> &Signature {
        (**self).signature()
    }
    fn gen_sort(&self, g: &Self::Gen) -> Result<usize> {
        (**self).gen_sort(g)
    }
    fn gluing(&self, g: &Self::Gen, face: usize) -> Result<Term<Self::Gen>> {
        (**self).gluing(g, face)
    }
}

impl<C: FiniteContext + ?Sized> FiniteContext for &C {
    fn generators(&self, sort: usize) -> Vec<Self::Gen> {
        (**self).generators(sort)
    }
}

pub fn sort_of<C: Context + ?Sized>(ctx: &C, t: &Term<C::Gen>) -> Result<usize> {
    match t {
        Term::Var(g) => ctx.gen_sort(g),
        Term::App(s, _) => Ok(ctx.signature().symbol(s)?.sort),
    }
}

/// The boundary action `δ*` of a non-identity face.
pub fn boundary<C: Context + ?Sized>(ctx: &C, face: usize, t: &Term<C::Gen>) -> Result<Term<C::Gen>> {
    let sig = ctx.signature();
    let base = sig.base();
    let s = sort_of(ctx, t)?;
    if s != base.face(face).dst {
        return Err(Error::SortMismatch(format!(
            "face `{}` applied to a term of sort `{}`",
            base.face(face).id,
            base.sort(s).id
        )));
    }
    match t {
        Term::Var(g) => ctx.gluing(g, face),
        Term::App(sym, args) => {
            let f = sig.symbol(sym)?;
            let bt = &f.boundary_ix()[base.face_position(face)];
            bt.bind(&mut |&k: &usize| Ok::<_, Error>(args[k].clone()))
        }
    }
}

pub fn boundary_arrow<C: Context + ?Sized>(ctx: &C, a: Arrow, t: &Term<C::Gen>) -> Result<Term<C::Gen>> {
    match a {
        Arrow::Id(_) => Ok(t.clone()),
        Arrow::Face(f) => boundary(ctx, f, t),
    }
}

/// Checks that an argument family is a natural map from the arity.
pub fn check_args<C: Context + ?Sized>(ctx: &C, symbol: &Name, args: &[Term<C::Gen>]) -> Result<()> {
    let sig = ctx.signature();
    let f = sig.symbol(symbol)?;
    let arity = f.arity();
    let base = sig.base();
    if args.len() != arity.total() {
        return Err(Error::IncompatibleArgs(format!(
            "`{symbol}` takes {} arguments, got {}",
            arity.total(),
            args.len()
        )));
    }
    for (n, arg) in args.iter().enumerate() {
        let (s, k) = arity.unflat(n);
        let found = sort_of(ctx, arg)?;
        if found != s {
            return Err(Error::SortMismatch(format!(
                "argument `{}` of `{symbol}` has sort `{}`, expected `{}`",
                arity.cell_name(s, k),
                base.sort(found).id,
                base.sort(s).id
            )));
        }
        for &g in base.faces_into(s) {
            let lower = arity.flat(base.face(g).src, arity.act(g, k));
            if boundary(ctx, g, arg)? != args[lower] {
                return Err(Error::IncompatibleArgs(format!(
                    "`{symbol}`: {}* of the argument at `{}` is {}, but the argument at `{}` is {}",
                    base.face(g).id,
                    arity.cell_name(s, k),
                    boundary(ctx, g, arg)?,
                    arity.cell_name(base.face(g).src, arity.act(g, k)),
                    args[lower]
                )));
            }
        }
    }
    Ok(())
}

/// Builds `f[τ]` after checking the family.
pub fn mk_app<C: Context + ?Sized>(ctx: &C, symbol: &str, args: Vec<Term<C::Gen>>) -> Result<Term<C::Gen>> {
    let symbol = ctx.signature().symbol(symbol)?.id.clone();
    check_args(ctx, &symbol, &args)?;
    Ok(Term::App(symbol, args.into()))
}

/// Builds `f[τ]` from a cell-name keyed family.
pub fn mk_app_named<C: Context + ?Sized>(
    ctx: &C,
    symbol: &str,
    args: &BTreeMap<&str, Term<C::Gen>>,
) -> Result<Term<C::Gen>> {
    let f = ctx.signature().symbol(symbol)?;
    let arity = f.arity();
    let mut flat = vec![None; arity.total()];
    for (cell, t) in args {
        let (s, k) = arity.cell_index(cell)?;
        flat[arity.flat(s, k)] = Some(t.clone());
    }
    let args = flat
        .into_iter()
        .enumerate()
        .map(|(n, t)| {
            let (s, k) = arity.unflat(n);
            t.ok_or_else(|| Error::IncompatibleArgs(format!("missing argument `{}`", arity.cell_name(s, k))))
        })
        .collect::<Result<Vec<_>>>()?;
    mk_app(ctx, symbol, args)
}

/// Full well-formedness check; returns the sort.
pub fn check_term<C: Context + ?Sized>(ctx: &C, t: &Term<C::Gen>) -> Result<usize> {
    match t {
        Term::Var(g) => ctx.gen_sort(g),
        Term::App(s, args) => {
            for a in args.iter() {
                check_term(ctx, a)?;
            }
            check_args(ctx, s, args)?;
            Ok(ctx.signature().symbol(s)?.sort)
        }
    }
}

/// Fills in a boundary family on the faces into `i` from the entries given,
/// using `δ'*(t_δ) = t_{δ∘δ'}`. Returns the position of an underivable face
/// on failure.
pub fn complete_family<T: Clone>(
    base: &DirectCategory,
    i: usize,
    given: Vec<Option<T>>,
    face: &mut dyn FnMut(usize, &T) -> Result<T>,
) -> Result<Result<Vec<T>, usize>> {
    let into = base.faces_into(i);
    let mut order: Vec<usize> = (0..into.len()).collect();
    order.sort_by_key(|&p| std::cmp::Reverse(base.dim(base.face(into[p]).src)));
    let mut fam = given;
    for &p in &order {
        if fam[p].is_some() {
            continue;
        }
        let eps = into[p];
        let src = base.face(eps).src;
        let mut found = None;
        'search: for (q, &d) in into.iter().enumerate() {
            let Some(td) = &fam[q] else { continue };
            let j = base.face(d).src;
            for g in base.hom(src, j) {
                if let Arrow::Face(g) = g {
                    if base.compose_faces(g, d) == Some(eps) {
                        found = Some(face(g, td)?);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(t) => fam[p] = Some(t),
            None => return Ok(Err(p)),
        }
    }
    Ok(Ok(fam.into_iter().map(|t| t.expect("filled")).collect()))
}

/// Checks `δ'*(t_δ) = t_{δ∘δ'}` for all composable pairs of faces into `i`.
/// Returns the offending `(δ, δ')` on failure.
pub fn check_cocycle<T: PartialEq>(
    base: &DirectCategory,
    i: usize,
    fam: &[T],
    face: &mut dyn FnMut(usize, &T) -> Result<T>,
) -> Result<Option<(usize, usize)>> {
    for (p, &d) in base.faces_into(i).iter().enumerate() {
        let j = base.face(d).src;
        for &g in base.faces_into(j) {
            let e = base.compose_faces(g, d).expect("composable");
            if face(g, &fam[p])? != fam[base.face_position(e)] {
                return Ok(Some((d, g)));
            }
        }
    }
    Ok(None)
}

/// JSON term grammar: `{"var": gen}` or `{"app": {"symbol", "args": [{"cell", "term"}]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawTerm {
    Var(String),
    App(RawApp),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawApp {
    pub symbol: String,
    #[serde(default)]
    pub args: Vec<RawArg>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArg {
    pub cell: String,
    pub term: RawTerm,
}

impl Term<Name> {
    /// Parses without checking well-formedness; use [`check_term`] afterwards.
    pub fn from_raw(raw: &RawTerm, sig: &Signature) -> Result<Term> {
        match raw {
            RawTerm::Var(v) => Ok(Term::Var(name(v))),
            RawTerm::App(app) => {
                let f = sig.symbol(&app.symbol)?;
                let arity = f.arity();
                let mut flat: Vec<Option<Term>> = vec![None; arity.total()];
                for a in &app.args {
                    let (s, k) = arity.cell_index(&a.cell)?;
                    let slot = &mut flat[arity.flat(s, k)];
                    if slot.is_some() {
                        return Err(Error::DuplicateId(a.cell.clone()));
                    }
                    *slot = Some(Term::from_raw(&a.term, sig)?);
                }
                let args = flat
                    .into_iter()
                    .enumerate()
                    .map(|(n, t)| {
                        let (s, k) = arity.unflat(n);
                        t.ok_or_else(|| {
                            Error::IncompatibleArgs(format!("`{}` is missing argument `{}`", app.symbol, arity.cell_name(s, k)))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::App(f.id.clone(), args.into()))
            }
        }
    }
}

impl<V: Clone + fmt::Display> Term<V> {
    pub fn to_raw(&self, sig: &Signature) -> RawTerm {
        match self {
            Term::Var(v) => RawTerm::Var(v.to_string()),
            Term::App(s, args) => {
                let arity = sig.symbol(s).expect("symbol of a checked term").arity();
                RawTerm::App(RawApp {
                    symbol: s.to_string(),
                    args: args
                        .iter()
                        .enumerate()
                        .map(|(n, a)| {
                            let (s, k) = arity.unflat(n);
                            RawArg { cell: arity.cell_name(s, k).to_string(), term: a.to_raw(sig) }
                        })
                        .collect(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_and_display() {
        let v: Term<Name> = Term::Var(name("p"));
        assert_eq!(v.depth(), 0);
        let t = Term::app(name("f"), vec![v.clone(), Term::app(name("g"), vec![])]);
        assert_eq!(t.depth(), 2);
        assert_eq!(Term::<Name>::app(name("k"), vec![]).depth(), 1);
        assert_eq!(t.to_string(), "f[p,g[]]");
        assert_eq!(t.size(), 3);
    }

    #[test]
    fn bind_replaces_variables() {
        let t = Term::app(name("f"), vec![Term::Var(1usize), Term::Var(2)]);
        let r: Term<usize> = t.bind(&mut |&v| Ok::<_, ()>(Term::Var(v * 10))).unwrap();
        assert_eq!(r, Term::app(name("f"), vec![Term::Var(10), Term::Var(20)]));
    }

    #[test]
    fn raw_term_shape() {
        let raw: RawTerm = serde_json::from_str(r#"{"var":"p"}"#).unwrap();
        assert_eq!(raw, RawTerm::Var("p".into()));
        let raw: RawTerm =
            serde_json::from_str(r#"{"app":{"symbol":"comp","args":[{"cell":"x","term":{"var":"p"}}]}}"#).unwrap();
        assert!(matches!(raw, RawTerm::App(_)));
    }

    #[test]
    fn walk2_terms() {
        use crate::fixtures::{comp_uv, walk2};
        let w = walk2();
        let (s, t) = (w.base().face_index("s").unwrap(), w.base().face_index("t").unwrap());
        let args: BTreeMap<&str, Term> =
            [("x", "p"), ("y", "q"), ("z", "r"), ("f", "u"), ("g", "v")].iter().map(|(c, g)| (*c, Term::Var(name(g)))).collect();
        let t_uv = mk_app_named(&w, "comp", &args).unwrap();
        assert_eq!(t_uv, comp_uv());
        assert_eq!(boundary(&w, s, &t_uv).unwrap(), Term::Var(name("p")));
        assert_eq!(boundary(&w, t, &t_uv).unwrap(), Term::Var(name("r")));
        assert_eq!(boundary(&w, s, &Term::Var(name("u"))).unwrap(), Term::Var(name("p")));
        assert!(matches!(boundary(&w, s, &Term::Var(name("p"))), Err(Error::SortMismatch(_))));
        let mut bad = args.clone();
        bad.insert("y", Term::Var(name("r")));
        assert!(matches!(mk_app_named(&w, "comp", &bad), Err(Error::IncompatibleArgs(_))));
        let raw = t_uv.to_raw(w.signature());
        assert_eq!(Term::from_raw(&raw, w.signature()).unwrap(), t_uv);
    }
}
