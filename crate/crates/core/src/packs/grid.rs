//! Cubical sorts, grids and their positions, and coherence symbols for
//! multiple categories.
//!
//! Sorts are subsets of directions written `{0,1}`. The face
//! `δ_J^α : I∖J → I` is written `d{I}:j±,..` with `+` where `α(j) = 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::category::{name, validate_category, DirectCategory, Name, RawCategory, RawCompose, RawFace, RawSort};
use crate::computad::free_computad;
use crate::error::{Error, Result};
use crate::monad::unit_family;
use crate::packs::{free_inclusion, is_epi_through, push_term};
use crate::presheaf::{Presheaf, PresheafMorphism};
use crate::signature::{FunctionSymbol, Signature, SymbolSpec};
use crate::term::{boundary, Term};

type Dirs = u64;

fn members(m: Dirs) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

fn mask(dirs: impl IntoIterator<Item = usize>) -> Dirs {
    dirs.into_iter().fold(0, |m, i| m | 1 << i)
}

pub fn cube_sort(dirs: &[usize]) -> String {
    let d: Vec<String> = dirs.iter().map(usize::to_string).collect();
    format!("{{{}}}", d.join(","))
}

fn sort_of_mask(m: Dirs) -> String {
    cube_sort(&members(m))
}

/// `δ_J^α` into `I`, with `α` given as the set of `j` where it is 1.
fn face_of_masks(i: Dirs, j: Dirs, alpha: Dirs) -> String {
    let e: Vec<String> = members(j).iter().map(|&d| format!("{d}{}", if alpha >> d & 1 == 1 { '+' } else { '-' })).collect();
    format!("d{}:{}", sort_of_mask(i), e.join(","))
}

/// `δ_J^α : I∖J → I`.
pub fn cube_face(i: &[usize], alpha: &[(usize, bool)]) -> String {
    face_of_masks(mask(i.iter().copied()), mask(alpha.iter().map(|a| a.0)), mask(alpha.iter().filter(|a| a.1).map(|a| a.0)))
}

fn subsets(m: Dirs) -> Vec<Dirs> {
    let mut out = Vec::new();
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out.reverse();
    out
}

/// Subsets of `{0, .., n-1}` with the faces `δ_J^α`.
pub fn cube_category(n: usize) -> Result<DirectCategory> {
    if n > 16 {
        return Err(Error::BadIndex(format!("{n} directions is too many to tabulate")));
    }
    let all: Dirs = (1 << n) - 1;
    let sorts: Vec<Dirs> = subsets(all);
    let mut faces = Vec::new();
    let mut compose = Vec::new();
    for &i in &sorts {
        for j in subsets(i).into_iter().filter(|&j| j != 0) {
            for a in subsets(j) {
                faces.push(RawFace {
                    id: face_of_masks(i, j, a),
                    src: sort_of_mask(i & !j),
                    dst: sort_of_mask(i),
                });
                let rest = i & !j;
                for k in subsets(rest).into_iter().filter(|&k| k != 0) {
                    for b in subsets(k) {
                        compose.push(RawCompose {
                            first: face_of_masks(rest, k, b),
                            second: face_of_masks(i, j, a),
                            result: face_of_masks(i, j | k, a | b),
                        });
                    }
                }
            }
        }
    }
    validate_category(&RawCategory {
        sorts: sorts.iter().map(|&s| RawSort { id: sort_of_mask(s), dim: s.count_ones() as usize }).collect(),
        faces,
        compose,
    })
}

/// Number of cubes in each direction of a finite set `I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grid {
    pub counts: BTreeMap<usize, usize>,
}

impl Grid {
    /// Directions `0, 1, ..` with the given counts.
    pub fn new(counts: &[usize]) -> Grid {
        Grid { counts: counts.iter().copied().enumerate().collect() }
    }

    pub fn directions(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    /// `d_J G`: forgets the directions in `J`.
    pub fn forget(&self, j: &[usize]) -> Grid {
        Grid { counts: self.counts.iter().filter(|(d, _)| !j.contains(d)).map(|(&d, &c)| (d, c)).collect() }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "({})", c.join(","))
    }
}

fn position_name(j: Dirs, r: &[usize]) -> Name {
    let rs: Vec<String> = r.iter().map(usize::to_string).collect();
    name(&format!("{}({})", sort_of_mask(j), rs.join(",")))
}

/// Parses a face id back into `(J, α)`.
fn face_data(base: &DirectCategory, f: usize) -> (Dirs, Dirs) {
    let id = &base.face(f).id;
    let tail = id.rsplit(':').next().unwrap_or("");
    let (mut j, mut a) = (0, 0);
    for e in tail.split(',').filter(|e| !e.is_empty()) {
        let (d, sign) = e.split_at(e.len() - 1);
        let d: usize = d.parse().expect("face ids are generated");
        j |= 1 << d;
        if sign == "+" {
            a |= 1 << d;
        }
    }
    (j, a)
}

fn sort_mask(base: &DirectCategory, s: usize) -> Result<Dirs> {
    let id = &base.sort(s).id;
    let inner = id.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(|| Error::BadSubset(format!("`{id}` is not a cube sort")))?;
    let mut m = 0;
    for d in inner.split(',').filter(|d| !d.is_empty()) {
        m |= 1 << d.parse::<usize>().map_err(|_| Error::BadSubset(format!("`{id}` is not a cube sort")))?;
    }
    Ok(m)
}

fn grid_cells(base: &DirectCategory, g: &Grid) -> Result<(Vec<Vec<Name>>, HashMap<Name, (Dirs, Vec<usize>)>)> {
    let dirs = g.directions();
    let i = mask(dirs.iter().copied());
    let mut cells = vec![Vec::new(); base.sort_count()];
    let mut data = HashMap::new();
    let mut found = false;
    for s in 0..base.sort_count() {
        let j = sort_mask(base, s)?;
        found |= j == i;
        if j & !i != 0 {
            continue;
        }
        let mut rs: Vec<Vec<usize>> = vec![Vec::new()];
        for &d in &dirs {
            let top = g.counts[&d] + usize::from(j >> d & 1 == 0);
            rs = rs.into_iter().flat_map(|r| (0..top).map(move |v| [r.clone(), vec![v]].concat())).collect();
        }
        for r in rs {
            let n = position_name(j, &r);
            cells[s].push(n.clone());
            data.insert(n, (j, r));
        }
    }
    if !found {
        return Err(Error::BadSubset(format!("directions {} are not a sort of the base", cube_sort(&dirs))));
    }
    Ok((cells, data))
}

/// `Pos G`: a cube at `R` of sort `J` for `R(i) ≤ G(i)`, strictly on `J`.
pub fn grid_positions(base: &Arc<DirectCategory>, g: &Grid) -> Result<Presheaf> {
    let (cells, data) = grid_cells(base, g)?;
    let dirs = g.directions();
    Presheaf::from_fn(base.clone(), cells, |f, c| {
        let (k, alpha) = face_data(base, f);
        let (j, r) = &data[c];
        let r2: Vec<usize> = dirs.iter().zip(r).map(|(&d, &v)| v + usize::from(k >> d & alpha >> d & 1 == 1)).collect();
        Some(position_name(j & !k, &r2))
    })
}

/// `δ_J^{α,G} : Pos(d_J G) → Pos G`.
pub fn grid_inclusion(base: &Arc<DirectCategory>, g: &Grid, alpha: &[(usize, bool)]) -> Result<PresheafMorphism> {
    if let Some((d, _)) = alpha.iter().find(|(d, _)| !g.counts.contains_key(d)) {
        return Err(Error::BadSubset(format!("direction {d} is not in the grid")));
    }
    let j: Vec<usize> = alpha.iter().map(|a| a.0).collect();
    let small = g.forget(&j);
    let src = Arc::new(grid_positions(base, &small)?);
    let dst = Arc::new(grid_positions(base, g)?);
    let (_, data) = grid_cells(base, &small)?;
    let mut map = BTreeMap::new();
    for s in 0..base.sort_count() {
        for c in src.cells(s) {
            let (jm, r) = &data[c];
            let mut it = r.iter();
            let full: Vec<usize> = g
                .counts
                .iter()
                .map(|(d, &cnt)| match alpha.iter().find(|a| a.0 == *d) {
                    Some(&(_, up)) => if up { cnt } else { 0 },
                    None => *it.next().expect("one value per kept direction"),
                })
                .collect();
            map.insert(c.to_string(), position_name(*jm, &full).to_string());
        }
    }
    PresheafMorphism::from_names(src, dst, &map)
}

/// `coh_{G,A}` of sort `I` from terms `t_i^α` over `Pos G`, keyed by
/// `(i, α)`, after checking that they agree on corners and that each is an
/// epimorphic term pushed along `δ_i^{α,G}`.
pub fn sigma_mcat_symbol(sig: &Arc<Signature>, g: &Grid, a: &BTreeMap<(usize, bool), Term>) -> Result<FunctionSymbol> {
    let base = sig.base();
    let dirs = g.directions();
    if dirs.is_empty() {
        return Err(Error::SideConditionFailure("there are no coherences of dimension 0".into()));
    }
    let sort = base.sort_index(&cube_sort(&dirs))?;
    let arity = Arc::new(grid_positions(base, g)?);
    let c = Arc::new(free_computad(&arity, sig.clone())?);
    let term = |i: usize, up: bool| -> Result<&Term> {
        a.get(&(i, up)).ok_or_else(|| Error::SideConditionFailure(format!("no term for direction {i}, side {}", u8::from(up))))
    };
    let without = |i: usize| -> Vec<usize> { dirs.iter().copied().filter(|&d| d != i).collect() };
    if let Some((i, _)) = a.keys().find(|(i, _)| !dirs.contains(i)) {
        return Err(Error::SideConditionFailure(format!("direction {i} is not in the grid")));
    }
    for &i in &dirs {
        for ai in [false, true] {
            let ti = term(i, ai)?;
            for &j in dirs.iter().filter(|&&j| j != i) {
                for aj in [false, true] {
                    let tj = term(j, aj)?;
                    let lhs = boundary(&*c, base.face_index(&cube_face(&without(i), &[(j, aj)]))?, ti)?;
                    let rhs = boundary(&*c, base.face_index(&cube_face(&without(j), &[(i, ai)]))?, tj)?;
                    if lhs != rhs {
                        return Err(Error::SideConditionFailure(format!(
                            "corner ({i},{}) ({j},{}) : {lhs} differs from {rhs}",
                            u8::from(ai),
                            u8::from(aj)
                        )));
                    }
                }
            }
            let incl = free_inclusion(sig, &grid_inclusion(base, g, &[(i, ai)])?)?;
            if !is_epi_through(&incl, ti)? {
                return Err(Error::SideConditionFailure(format!(
                    "t[{i},{}] = {ti} is not an epimorphic term of the face",
                    u8::from(ai)
                )));
            }
        }
    }
    let mut bd = Vec::new();
    let mut label = Vec::new();
    for &i in &dirs {
        for ai in [false, true] {
            let t = term(i, ai)?.clone();
            label.push(t.to_string());
            bd.push((base.face_index(&cube_face(&dirs, &[(i, ai)]))?, t));
        }
    }
    let id = name(&format!("coh{g}[{}]", label.join(";")));
    sig.check_symbol(&SymbolSpec { id, sort, arity, boundary: bd })
}

/// Composition of whole grids: one coherence per grid with more than one top
/// cube, bounded on each face by the composite of that face.
pub fn composite_signature(counts: &[usize]) -> Result<Signature> {
    let base = Arc::new(cube_category(counts.len())?);
    let mut sig = Arc::new(Signature::empty(base));
    composite(&mut sig, &Grid::new(counts))?;
    Ok(Arc::try_unwrap(sig).unwrap_or_else(|s| (*s).clone()))
}

/// The composite of `g` as a term over `Pos g`, adding symbols as needed.
fn composite(sig: &mut Arc<Signature>, g: &Grid) -> Result<Term> {
    let base = sig.base().clone();
    let pos = grid_positions(&base, g)?;
    let dirs = g.directions();
    if g.counts.values().all(|&c| c == 1) {
        return Ok(Term::Var(position_name(mask(dirs.iter().copied()), &vec![0; dirs.len()])));
    }
    let mut a = BTreeMap::new();
    for &i in &dirs {
        let face = composite(sig, &g.forget(&[i]))?;
        for up in [false, true] {
            a.insert((i, up), push_term(&grid_inclusion(&base, g, &[(i, up)])?, &face));
        }
    }
    let id = format!("coh{g}");
    if sig.symbol(&id).is_err() {
        let f = sigma_mcat_symbol(sig, g, &a)?;
        let spec = SymbolSpec { id: name(&id), sort: f.sort, arity: f.arity().clone(), boundary: boundary_pairs(&base, &f) };
        *sig = Arc::new(sig.append_symbol(spec)?);
    }
    Ok(Term::app(name(&id), unit_family(&pos)))
}

fn boundary_pairs(base: &DirectCategory, f: &FunctionSymbol) -> Vec<(usize, Term)> {
    base.faces_into(f.sort).iter().copied().zip(f.boundary().iter().cloned()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(j: &[usize], r: &[usize]) -> Term {
        Term::Var(position_name(mask(j.iter().copied()), r))
    }

    #[test]
    fn positions_of_the_figure() {
        let base = Arc::new(cube_category(2).unwrap());
        let pos = grid_positions(&base, &Grid::new(&[4, 1])).unwrap();
        let counts: Vec<usize> =
            [&[][..], &[0], &[1], &[0, 1]].iter().map(|j| pos.cell_count(base.sort_index(&cube_sort(j)).unwrap())).collect();
        assert_eq!(counts, vec![10, 8, 5, 4]);
        let f = base.face_index(&cube_face(&[0, 1], &[(0, true)])).unwrap();
        let (s, k) = pos.cell_index("{0,1}(2,0)").unwrap();
        assert_eq!(s, base.sort_index("{0,1}").unwrap());
        assert_eq!(&**pos.cell_name(base.sort_index("{1}").unwrap(), pos.act(f, k)), "{1}(3,0)");
    }

    #[test]
    fn inclusions() {
        let base = Arc::new(cube_category(2).unwrap());
        let g = Grid::new(&[4, 1]);
        let id = grid_inclusion(&base, &g, &[]).unwrap();
        assert_eq!(id, PresheafMorphism::identity(id.dst.clone()));
        let top = grid_inclusion(&base, &g, &[(1, true)]).unwrap();
        assert_eq!(top.src.total(), 5 + 4);
        assert_eq!(top.to_names()["{}(2)"], "{}(2,1)");
        assert!(matches!(grid_inclusion(&base, &g, &[(3, true)]), Err(Error::BadSubset(_))));
    }

    #[test]
    fn one_dimensional_coherences() {
        let base = Arc::new(cube_category(1).unwrap());
        let sig = Arc::new(Signature::empty(base));
        let unary = BTreeMap::from([((0, false), cell(&[], &[0])), ((0, true), cell(&[], &[1]))]);
        let f = sigma_mcat_symbol(&sig, &Grid::new(&[1]), &unary).unwrap();
        assert_eq!(f.arity().total(), 3);
        let binary = BTreeMap::from([((0, false), cell(&[], &[0])), ((0, true), cell(&[], &[2]))]);
        assert!(sigma_mcat_symbol(&sig, &Grid::new(&[2]), &binary).is_ok());
        let skewed = BTreeMap::from([((0, false), cell(&[], &[0])), ((0, true), cell(&[], &[1]))]);
        assert!(matches!(sigma_mcat_symbol(&sig, &Grid::new(&[2]), &skewed), Err(Error::SideConditionFailure(_))));
    }

    #[test]
    fn composites_of_grids() {
        let sig = composite_signature(&[4, 1]).unwrap();
        let ids: Vec<&str> = sig.symbols().iter().map(|f| &*f.id).collect();
        assert_eq!(ids, vec!["coh(0:4)", "coh(0:4,1:1)"]);
        let top = sig.symbol("coh(0:4,1:1)").unwrap();
        assert_eq!(top.arity().total(), 10 + 8 + 5 + 4);
        assert_eq!(composite_signature(&[1, 1]).unwrap().symbols().len(), 0);
        assert_eq!(composite_signature(&[2, 2]).unwrap().symbols().len(), 3);
    }
}
