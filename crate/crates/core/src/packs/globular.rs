//! Globes, Batanin trees and coherence symbols for weak ω-categories.
//!
//! Trees, their positions, boundaries and the source and target inclusions
//! follow the usual recursive definitions (positions of a tree are the wedge
//! of the suspensions of its subtrees); they are not derived here from
//! first principles.
//!
//! Sorts are `0, 1, ..`; `s{j}` and `t{j}` map `j` into `j+1`, and the
//! composite faces `j → i` are `s{j}_{i}` and `t{j}_{i}`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::category::{name, validate_category, DirectCategory, Name, RawCategory, RawCompose, RawFace, RawSort};
use crate::computad::free_computad;
use crate::error::{Error, Result};
use crate::monad::unit_family;
use crate::packs::{free_inclusion, is_epi_through, push_term};
use crate::presheaf::{Presheaf, PresheafMorphism};
use crate::signature::{FunctionSymbol, Signature, SymbolSpec};
use crate::term::{boundary, sort_of, Term};

pub fn globe_face(source: bool, j: usize, i: usize) -> String {
    let x = if source { 's' } else { 't' };
    if i == j + 1 {
        format!("{x}{j}")
    } else {
        format!("{x}{j}_{i}")
    }
}

/// Globes up to dimension `n`.
pub fn globe_category(n: usize) -> Result<DirectCategory> {
    let sorts = (0..=n).map(|k| RawSort { id: k.to_string(), dim: k }).collect();
    let mut faces = Vec::new();
    let mut compose = Vec::new();
    for i in 1..=n {
        for j in 0..i {
            for x in [true, false] {
                faces.push(RawFace { id: globe_face(x, j, i), src: j.to_string(), dst: i.to_string() });
                for k in 0..j {
                    for y in [true, false] {
                        compose.push(RawCompose {
                            first: globe_face(y, k, j),
                            second: globe_face(x, j, i),
                            result: globe_face(y, k, i),
                        });
                    }
                }
            }
        }
    }
    validate_category(&RawCategory { sorts, faces, compose })
}

/// A finite rooted planar tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree(pub Vec<Tree>);

impl Tree {
    pub fn leaf() -> Tree {
        Tree(Vec::new())
    }

    /// Height of the tree.
    pub fn dim(&self) -> usize {
        self.0.iter().map(|c| c.dim() + 1).max().unwrap_or(0)
    }

    /// `∂_n B`: cut at height `n`.
    pub fn boundary(&self, n: usize) -> Tree {
        if n == 0 {
            return Tree::leaf();
        }
        Tree(self.0.iter().map(|c| c.boundary(n - 1)).collect())
    }

    /// Positions as paths: `[m]` is the `m`-th vertex, `[m, ..c]` the cell
    /// `c` of the `m`-th subtree, suspended.
    pub fn positions(&self, dim: usize) -> Vec<Vec<usize>> {
        if dim == 0 {
            return (0..=self.0.len()).map(|m| vec![m]).collect();
        }
        let mut out = Vec::new();
        for (m, c) in self.0.iter().enumerate() {
            for p in c.positions(dim - 1) {
                out.push([vec![m], p].concat());
            }
        }
        out
    }

    /// Image of a position of `∂_n B` under `s_n^B` or `t_n^B`.
    pub fn include(&self, n: usize, source: bool, p: &[usize]) -> Vec<usize> {
        if n == 0 {
            return vec![if source { 0 } else { self.0.len() }];
        }
        match p {
            [m] => vec![*m],
            [m, rest @ ..] => [vec![*m], self.0[*m].include(n - 1, source, rest)].concat(),
            [] => unreachable!("positions are non-empty"),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// Bracket notation: `[]` is a point, `[[][]]` a composable pair.
    fn from_str(s: &str) -> Result<Tree> {
        let mut stack: Vec<Vec<Tree>> = Vec::new();
        let mut done = None;
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            if done.is_some() {
                return Err(Error::Malformed(format!("trailing input in tree `{s}`")));
            }
            match ch {
                '[' => stack.push(Vec::new()),
                ']' => {
                    let t = Tree(stack.pop().ok_or_else(|| Error::Malformed(format!("unbalanced tree `{s}`")))?);
                    match stack.last_mut() {
                        Some(parent) => parent.push(t),
                        None => done = Some(t),
                    }
                }
                ',' => {}
                _ => return Err(Error::Malformed(format!("unexpected `{ch}` in tree `{s}`"))),
            }
        }
        done.ok_or_else(|| Error::Malformed(format!("unbalanced tree `{s}`")))
    }
}

pub fn position_name(p: &[usize]) -> Name {
    let s: Vec<String> = p.iter().map(usize::to_string).collect();
    name(&s.join("/"))
}

fn parse_position(c: &str) -> Vec<usize> {
    c.split('/').map(|x| x.parse().expect("generated position")).collect()
}

fn act_on(p: &[usize], source: bool) -> Vec<usize> {
    match p {
        [m, _] => vec![if source { *m } else { m + 1 }],
        [m, rest @ ..] => [vec![*m], act_on(rest, source)].concat(),
        _ => unreachable!("only positive-dimensional cells have faces"),
    }
}

/// `Pos B` over globes of dimension at least that of `B`.
pub fn tree_positions(base: &Arc<DirectCategory>, b: &Tree) -> Result<Presheaf> {
    if base.max_dim().is_none_or(|d| d < b.dim()) {
        return Err(Error::BadIndex(format!("tree {b} has dimension {}", b.dim())));
    }
    let mut cells = vec![Vec::new(); base.sort_count()];
    for d in 0..=b.dim() {
        let s = base.sort_index(&d.to_string())?;
        cells[s] = b.positions(d).iter().map(|p| position_name(p)).collect();
    }
    Presheaf::from_fn(base.clone(), cells, |f, c| {
        let face = base.face(f);
        let steps = base.dim(face.dst) - base.dim(face.src);
        let source = face.id.starts_with('s');
        let mut p = parse_position(c);
        for _ in 0..steps {
            p = act_on(&p, source);
        }
        Some(position_name(&p))
    })
}

/// `s_n^B` or `t_n^B : Pos(∂_n B) → Pos B`.
pub fn tree_inclusion(base: &Arc<DirectCategory>, b: &Tree, n: usize, source: bool) -> Result<PresheafMorphism> {
    let small = b.boundary(n);
    let src = Arc::new(tree_positions(base, &small)?);
    let dst = Arc::new(tree_positions(base, b)?);
    let mut map = std::collections::BTreeMap::new();
    for d in 0..=small.dim() {
        for p in small.positions(d) {
            map.insert(position_name(&p).to_string(), position_name(&b.include(n, source, &p)).to_string());
        }
    }
    PresheafMorphism::from_names(src, dst, &map)
}

/// `coh_{B,(a,b)}` of sort `n + 1` for terms `a, b` of sort `n` over
/// `Pos B`. With `groupoidal`, the epimorphism conditions are dropped.
pub fn sigma_cat_symbol_with(sig: &Arc<Signature>, b: &Tree, a: &Term, bt: &Term, groupoidal: bool) -> Result<FunctionSymbol> {
    let base = sig.base();
    let arity = Arc::new(tree_positions(base, b)?);
    let c = Arc::new(free_computad(&arity, sig.clone())?);
    let (sa, sb) = (sort_of(&*c, a)?, sort_of(&*c, bt)?);
    if sa != sb {
        return Err(Error::SideConditionFailure(format!("{a} and {bt} have different sorts")));
    }
    let n = base.dim(sa);
    if b.dim() > n + 1 {
        return Err(Error::SideConditionFailure(format!("tree {b} has dimension above {}", n + 1)));
    }
    let sort = base.sort_index(&(n + 1).to_string())?;
    if n > 0 {
        for x in [true, false] {
            let f = base.face_index(&globe_face(x, n - 1, n))?;
            let (l, r) = (boundary(&*c, f, a)?, boundary(&*c, f, bt)?);
            if l != r {
                return Err(Error::SideConditionFailure(format!(
                    "{} of {a} is {l} but {} of {bt} is {r}",
                    if x { "source" } else { "target" },
                    if x { "source" } else { "target" }
                )));
            }
        }
    }
    if !groupoidal {
        for (x, t) in [(true, a), (false, bt)] {
            let incl = free_inclusion(sig, &tree_inclusion(base, b, n, x)?)?;
            if !is_epi_through(&incl, t)? {
                return Err(Error::SideConditionFailure(format!(
                    "{t} is not an epimorphic term of the {} boundary of {b}",
                    if x { "source" } else { "target" }
                )));
            }
        }
    }
    let boundary = vec![
        (base.face_index(&globe_face(true, n, n + 1))?, a.clone()),
        (base.face_index(&globe_face(false, n, n + 1))?, bt.clone()),
    ];
    let id = name(&format!("coh{b}[{a};{bt}]"));
    sig.check_symbol(&SymbolSpec { id, sort, arity, boundary })
}

pub fn sigma_cat_symbol(sig: &Arc<Signature>, b: &Tree, a: &Term, bt: &Term) -> Result<FunctionSymbol> {
    sigma_cat_symbol_with(sig, b, a, bt, false)
}

/// Appends a checked symbol.
pub fn with_symbol(sig: &Signature, f: &FunctionSymbol) -> Result<Signature> {
    let mut bd = Vec::new();
    let base = sig.base();
    for (&face, t) in base.faces_into(f.sort).iter().zip(f.boundary()) {
        bd.push((face, t.clone()));
    }
    sig.append_symbol(SymbolSpec { id: f.id.clone(), sort: f.sort, arity: f.arity().clone(), boundary: bd })
}

/// Composition of a pasting diagram and, recursively, of its boundaries.
pub fn composite_signature(b: &Tree, groupoidal: bool) -> Result<Signature> {
    let base = Arc::new(globe_category(b.dim())?);
    let mut sig = Arc::new(Signature::empty(base));
    composite(&mut sig, b, groupoidal)?;
    Ok(Arc::try_unwrap(sig).unwrap_or_else(|s| (*s).clone()))
}

fn is_globe(b: &Tree) -> bool {
    match b.0.as_slice() {
        [] => true,
        [c] => is_globe(c),
        _ => false,
    }
}

/// The composite of `b` as a term over `Pos b`, adding symbols as needed.
fn composite(sig: &mut Arc<Signature>, b: &Tree, groupoidal: bool) -> Result<Term> {
    let base = sig.base().clone();
    let d = b.dim();
    if is_globe(b) {
        return Ok(Term::Var(position_name(&vec![0; d + 1])));
    }
    let face = composite(sig, &b.boundary(d - 1), groupoidal)?;
    let a = push_term(&tree_inclusion(&base, b, d - 1, true)?, &face);
    let bt = push_term(&tree_inclusion(&base, b, d - 1, false)?, &face);
    let f = sigma_cat_symbol_with(sig, b, &a, &bt, groupoidal)?;
    let id = f.id.clone();
    if sig.symbol(&id).is_err() {
        *sig = Arc::new(with_symbol(sig, &f)?);
    }
    Ok(Term::app(id, unit_family(&tree_positions(&base, b)?)))
}
