//! Computads, their morphisms, truncation and skeleta, free computads on
//! presheaves, and colimits of variable-to-variable diagrams.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{name, DirectCategory, Name};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::presheaf::{same_base, Presheaf};
use crate::signature::{validate_signature, RawSignature, Signature};
use crate::term::{boundary, check_cocycle, check_term, complete_family, Context, FiniteContext, RawTerm, Term};

/// A generator awaiting validation. Gluings may be given on any subset of
/// faces from which the others can be derived.
#[derive(Clone, Debug)]
pub struct GenSpec {
    pub name: Name,
    pub sort: usize,
    pub gluing: Vec<(usize, Term)>,
}

#[derive(Clone)]
pub struct Computad {
    sig: Arc<Signature>,
    gens: Vec<Vec<Name>>,
    index: HashMap<Name, (usize, usize)>,
    /// `[sort][generator][position of face in faces_into(sort)]`
    gluing: Vec<Vec<Vec<Term>>>,
}

impl PartialEq for Computad {
    fn eq(&self, other: &Self) -> bool {
        same_signature(&self.sig, &other.sig) && self.gens == other.gens && self.gluing == other.gluing
    }
}

impl Eq for Computad {}

impl fmt::Debug for Computad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.sig.base();
        let mut m = f.debug_map();
        for s in 0..base.sort_count() {
            for (k, g) in self.gens[s].iter().enumerate() {
                let glue: Vec<String> = base
                    .faces_into(s)
                    .iter()
                    .zip(&self.gluing[s][k])
                    .map(|(&d, t)| format!("{}:{t}", base.face(d).id))
                    .collect();
                m.entry(&format!("{g}@{}", base.sort(s).id), &glue);
            }
        }
        m.finish()
    }
}

pub(crate) fn same_signature(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Context for Computad {
    type Gen = Name;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn gen_sort(&self, g: &Name) -> Result<usize> {
        Ok(self.gen_index(g)?.0)
    }

    fn gluing(&self, g: &Name, face: usize) -> Result<Term> {
        let (s, k) = self.gen_index(g)?;
        let base = self.sig.base();
        if base.face(face).dst != s {
            return Err(Error::SortMismatch(format!("face `{}` applied to generator `{g}`", base.face(face).id)));
        }
        Ok(self.gluing[s][k][base.face_position(face)].clone())
    }
}

impl FiniteContext for Computad {
    fn generators(&self, sort: usize) -> Vec<Name> {
        self.gens[sort].clone()
    }
}

impl Computad {
    pub fn empty(sig: Arc<Signature>) -> Computad {
        let n = sig.base().sort_count();
        Computad { sig, gens: vec![Vec::new(); n], index: HashMap::new(), gluing: vec![Vec::new(); n] }
    }

    /// Validates generators in increasing dimension; gluings of a generator
    /// may only mention generators of strictly lower dimension.
    pub fn new(sig: Arc<Signature>, mut specs: Vec<GenSpec>) -> Result<Computad> {
        let base = sig.base().clone();
        specs.sort_by(|a, b| base.dim(a.sort).cmp(&base.dim(b.sort)).then_with(|| a.name.cmp(&b.name)));
        let mut c = Computad::empty(sig);
        let mut start = 0;
        while start < specs.len() {
            let d = base.dim(specs[start].sort);
            let end = start + specs[start..].iter().take_while(|s| base.dim(s.sort) == d).count();
            let mut added = Vec::new();
            for spec in &specs[start..end] {
                let fam = c.check_generator(spec)?;
                added.push((spec.sort, spec.name.clone(), fam));
            }
            for (s, g, fam) in added {
                if c.index.contains_key(&g) {
                    return Err(Error::DuplicateId(g.to_string()));
                }
                c.index.insert(g.clone(), (s, usize::MAX));
                c.gens[s].push(g);
                c.gluing[s].push(fam);
            }
            c.sort_generators();
            start = end;
        }
        Ok(c)
    }

    fn sort_generators(&mut self) {
        for s in 0..self.gens.len() {
            let mut pairs: Vec<(Name, Vec<Term>)> =
                self.gens[s].drain(..).zip(self.gluing[s].drain(..)).collect();
            pairs.sort_by(|a, b| a.0.cmp(&b.0));
            for (k, (g, fam)) in pairs.into_iter().enumerate() {
                self.index.insert(g.clone(), (s, k));
                self.gens[s].push(g);
                self.gluing[s].push(fam);
            }
        }
    }

    fn check_generator(&self, spec: &GenSpec) -> Result<Vec<Term>> {
        let base = self.sig.base();
        let i = spec.sort;
        let into = base.faces_into(i);
        let mut given: Vec<Option<Term>> = vec![None; into.len()];
        for (face, t) in &spec.gluing {
            let fi = base.face(*face);
            if fi.dst != i {
                return Err(Error::GluingIllTyped(format!(
                    "`{}`: face `{}` does not end at sort `{}`",
                    spec.name,
                    fi.id,
                    base.sort(i).id
                )));
            }
            let s = check_term(self, t).map_err(|e| match e {
                Error::UnknownSymbol(_) => e,
                other => Error::GluingIllTyped(format!("`{}` at face `{}`: {other}", spec.name, fi.id)),
            })?;
            if s != fi.src {
                return Err(Error::GluingIllTyped(format!(
                    "`{}` at face `{}`: term {t} has sort `{}`, expected `{}`",
                    spec.name,
                    fi.id,
                    base.sort(s).id,
                    base.sort(fi.src).id
                )));
            }
            let slot = &mut given[base.face_position(*face)];
            if slot.is_some() {
                return Err(Error::DuplicateId(format!("{} gluing at {}", spec.name, fi.id)));
            }
            *slot = Some(t.clone());
        }
        let fam = match complete_family(base, i, given, &mut |g, t| boundary(self, g, t))? {
            Ok(fam) => fam,
            Err(p) => {
                return Err(Error::GluingIllTyped(format!(
                    "`{}`: no gluing for face `{}`",
                    spec.name,
                    base.face(into[p]).id
                )))
            }
        };
        if let Some((d, g)) = check_cocycle(base, i, &fam, &mut |g, t| boundary(self, g, t))? {
            let comp = base.compose_faces(g, d).expect("composable");
            return Err(Error::CocycleFailure(format!(
                "`{}`: {}* of the gluing at `{}` differs from the gluing at `{}`",
                spec.name,
                base.face(g).id,
                base.face(d).id,
                base.face(comp).id
            )));
        }
        Ok(fam)
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn base(&self) -> &Arc<DirectCategory> {
        self.sig.base()
    }

    pub fn gens(&self, sort: usize) -> &[Name] {
        &self.gens[sort]
    }

    pub fn gen_count(&self, sort: usize) -> usize {
        self.gens[sort].len()
    }

    pub fn total_gens(&self) -> usize {
        self.gens.iter().map(Vec::len).sum()
    }

    pub fn gen_index(&self, g: &str) -> Result<(usize, usize)> {
        self.index.get(g).copied().ok_or_else(|| Error::UnknownGenerator(g.to_string()))
    }

    pub fn gen_name(&self, sort: usize, k: usize) -> &Name {
        &self.gens[sort][k]
    }

    /// Full gluing family of a generator, indexed like `faces_into(sort)`.
    pub fn gluing_family(&self, sort: usize, k: usize) -> &[Term] {
        &self.gluing[sort][k]
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Highest dimension carrying a generator.
    pub fn dimension(&self) -> Option<usize> {
        (0..self.gens.len()).filter(|&s| !self.gens[s].is_empty()).map(|s| self.base().dim(s)).max()
    }

    /// All generators as specs, so computads can be rebuilt or extended.
    pub fn specs(&self) -> Vec<GenSpec> {
        let base = self.base();
        let mut out = Vec::new();
        for s in 0..self.gens.len() {
            for (k, g) in self.gens[s].iter().enumerate() {
                out.push(GenSpec {
                    name: g.clone(),
                    sort: s,
                    gluing: base.faces_into(s).iter().copied().zip(self.gluing[s][k].iter().cloned()).collect(),
                });
            }
        }
        out
    }

    /// Drops generators above dimension `n`; the result lives over the
    /// restricted signature.
    pub fn truncate(&self, n: usize) -> Computad {
        let sig = Arc::new(self.sig.restrict(n));
        let mut c = self.clone();
        c.sig = sig;
        for s in 0..c.gens.len() {
            if self.base().dim(s) > n {
                for g in c.gens[s].drain(..) {
                    c.index.remove(&g);
                }
                c.gluing[s].clear();
            }
        }
        c
    }

    /// Re-extends a computad over a restricted signature to `sig` with no
    /// new generators.
    pub fn skeleton(&self, sig: Arc<Signature>) -> Result<Computad> {
        if !same_base(self.base(), sig.base()) {
            return Err(Error::BaseMismatch);
        }
        for f in self.sig.symbols() {
            if sig.symbol(&f.id)? != f {
                return Err(Error::BaseMismatch);
            }
        }
        let mut c = self.clone();
        c.sig = sig;
        Ok(c)
    }

    /// `sk_n tr_n C` together with its counit `κ` into `C`.
    pub fn skeleton_counit(self: &Arc<Self>, n: usize) -> ComputadMorphism {
        let sk = Arc::new(self.truncate(n).skeleton(self.sig.clone()).expect("same signature"));
        let assign = (0..sk.gens.len()).map(|s| sk.gens[s].iter().map(|g| Term::Var(g.clone())).collect()).collect();
        ComputadMorphism::new_unchecked(sk, self.clone(), assign)
    }

    pub fn to_raw(&self) -> RawComputad {
        let base = self.base();
        let mut generators = BTreeMap::new();
        let mut gluing = Vec::new();
        for s in 0..self.gens.len() {
            if self.gens[s].is_empty() {
                continue;
            }
            generators.insert(base.sort(s).id.to_string(), self.gens[s].iter().map(|g| g.to_string()).collect());
            for (k, g) in self.gens[s].iter().enumerate() {
                for (&d, t) in base.faces_into(s).iter().zip(&self.gluing[s][k]) {
                    gluing.push(RawGluing { gen: g.to_string(), face: base.face(d).id.to_string(), term: t.to_raw(&self.sig) });
                }
            }
        }
        RawComputad { signature: self.sig.to_raw(), generators, gluing }
    }
}

/// The free computad on a presheaf: cells as generators glued along the action.
pub fn free_computad(x: &Presheaf, sig: Arc<Signature>) -> Result<Computad> {
    if !same_base(x.base(), sig.base()) {
        return Err(Error::BaseMismatch);
    }
    let base = sig.base().clone();
    let mut specs = Vec::new();
    for s in 0..base.sort_count() {
        for (k, c) in x.cells(s).iter().enumerate() {
            let gluing = base
                .faces_into(s)
                .iter()
                .map(|&f| (f, Term::Var(x.cell_name(base.face(f).src, x.act(f, k)).clone())))
                .collect();
            specs.push(GenSpec { name: c.clone(), sort: s, gluing });
        }
    }
    Computad::new(sig, specs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawGluing {
    pub gen: String,
    pub face: String,
    pub term: RawTerm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawComputad {
    pub signature: RawSignature,
    #[serde(default)]
    pub generators: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub gluing: Vec<RawGluing>,
}

pub fn validate_computad(raw: &RawComputad) -> Result<Computad> {
    let sig = Arc::new(validate_signature(&raw.signature)?);
    validate_computad_on(raw, sig)
}

pub fn validate_computad_on(raw: &RawComputad, sig: Arc<Signature>) -> Result<Computad> {
    let base = sig.base().clone();
    let mut specs: Vec<GenSpec> = Vec::new();
    let mut pos: HashMap<&str, usize> = HashMap::new();
    for (sort, gens) in &raw.generators {
        let s = base.sort_index(sort)?;
        for g in gens {
            if pos.insert(g.as_str(), specs.len()).is_some() {
                return Err(Error::DuplicateId(g.clone()));
            }
            specs.push(GenSpec { name: name(g), sort: s, gluing: Vec::new() });
        }
    }
    for gl in &raw.gluing {
        let &p = pos.get(gl.gen.as_str()).ok_or_else(|| Error::UnknownGenerator(gl.gen.clone()))?;
        let f = base.face_index(&gl.face)?;
        specs[p].gluing.push((f, Term::from_raw(&gl.term, &sig)?));
    }
    Computad::new(sig, specs)
}

#[derive(Clone)]
pub struct ComputadMorphism {
    src: Arc<Computad>,
    dst: Arc<Computad>,
    /// `[sort][generator]` images in the target.
    assign: Vec<Vec<Term>>,
}

impl PartialEq for ComputadMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.assign == other.assign
            && (Arc::ptr_eq(&self.src, &other.src) || self.src == other.src)
            && (Arc::ptr_eq(&self.dst, &other.dst) || self.dst == other.dst)
    }
}

impl Eq for ComputadMorphism {}

impl fmt::Debug for ComputadMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for s in 0..self.assign.len() {
            for (k, t) in self.assign[s].iter().enumerate() {
                m.entry(&self.src.gens[s][k], t);
            }
        }
        m.finish()
    }
}

impl ComputadMorphism {
    /// Checks sorts and `δ*(σ v) = σ(φ_δ v)` for every generator.
    pub fn new(src: Arc<Computad>, dst: Arc<Computad>, assign: Vec<Vec<Term>>) -> Result<Self> {
        if !same_signature(&src.sig, &dst.sig) {
            return Err(Error::BaseMismatch);
        }
        let base = src.base().clone();
        if assign.len() != base.sort_count() || (0..assign.len()).any(|s| assign[s].len() != src.gens[s].len()) {
            return Err(Error::Malformed("assignment does not cover the generators of the source".into()));
        }
        let m = ComputadMorphism { src, dst, assign };
        for &s in base.sorts_by_dim() {
            for (k, t) in m.assign[s].iter().enumerate() {
                let g = &m.src.gens[s][k];
                let found = check_term(&*m.dst, t)?;
                if found != s {
                    return Err(Error::SortMismatch(format!(
                        "`{g}` of sort `{}` sent to {t} of sort `{}`",
                        base.sort(s).id,
                        base.sort(found).id
                    )));
                }
                for (&d, glue) in base.faces_into(s).iter().zip(&m.src.gluing[s][k]) {
                    let lhs = boundary(&*m.dst, d, t)?;
                    let rhs = m.apply(glue)?;
                    if lhs != rhs {
                        return Err(Error::BoundaryConditionFailure(format!(
                            "{}*({t}) = {lhs} but the image of the gluing of `{g}` is {rhs}",
                            base.face(d).id
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(src: Arc<Computad>, dst: Arc<Computad>, assign: Vec<Vec<Term>>) -> Self {
        ComputadMorphism { src, dst, assign }
    }

    pub fn from_names(src: Arc<Computad>, dst: Arc<Computad>, map: &BTreeMap<Name, Term>) -> Result<Self> {
        for g in map.keys() {
            src.gen_index(g)?;
        }
        let assign = (0..src.gens.len())
            .map(|s| {
                src.gens[s]
                    .iter()
                    .map(|g| map.get(g).cloned().ok_or_else(|| Error::UnknownGenerator(format!("no image for `{g}`"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ComputadMorphism::new(src, dst, assign)
    }

    /// A variable-to-variable morphism from generator indices.
    pub fn from_var_map(src: Arc<Computad>, dst: Arc<Computad>, map: &[Vec<usize>]) -> Result<Self> {
        let assign = (0..src.gens.len())
            .map(|s| map[s].iter().map(|&k| Term::Var(dst.gens[s][k].clone())).collect())
            .collect();
        ComputadMorphism::new(src, dst, assign)
    }

    pub fn identity(c: Arc<Computad>) -> Self {
        let assign = c.gens.iter().map(|gs| gs.iter().map(|g| Term::Var(g.clone())).collect()).collect();
        ComputadMorphism { src: c.clone(), dst: c, assign }
    }

    pub fn src(&self) -> &Arc<Computad> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<Computad> {
        &self.dst
    }

    pub fn assignment(&self) -> &[Vec<Term>] {
        &self.assign
    }

    pub fn image(&self, g: &str) -> Result<&Term> {
        let (s, k) = self.src.gen_index(g)?;
        Ok(&self.assign[s][k])
    }

    /// `Term(σ)`: substitution of generator images.
    pub fn apply(&self, t: &Term) -> Result<Term> {
        t.bind(&mut |g: &Name| self.image(g).cloned())
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ComputadMorphism) -> Result<ComputadMorphism> {
        if !(Arc::ptr_eq(&self.dst, &next.src) || self.dst == next.src) {
            return Err(Error::EndpointMismatch);
        }
        let assign = self
            .assign
            .iter()
            .map(|ts| ts.iter().map(|t| next.apply(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ComputadMorphism { src: self.src.clone(), dst: next.dst.clone(), assign })
    }

    /// Generator indices in the target, if every generator goes to a variable.
    pub fn var_map(&self) -> Option<Vec<Vec<usize>>> {
        self.assign
            .iter()
            .map(|ts| {
                ts.iter()
                    .map(|t| t.as_var().map(|g| self.dst.gen_index(g).expect("checked").1))
                    .collect::<Option<Vec<_>>>()
            })
            .collect()
    }

    pub fn is_var_to_var(&self) -> bool {
        self.assign.iter().flatten().all(|t| t.as_var().is_some())
    }

    /// Variable-to-variable and injective on generators.
    pub fn is_mono_var(&self) -> bool {
        self.var_map().is_some_and(|m| {
            m.iter().all(|ks| {
                let mut v = ks.clone();
                v.sort_unstable();
                v.windows(2).all(|w| w[0] != w[1])
            })
        })
    }

    pub fn to_raw(&self) -> RawMorphism {
        let mut assign = Vec::new();
        for s in 0..self.assign.len() {
            for (k, t) in self.assign[s].iter().enumerate() {
                assign.push(RawAssign { gen: self.src.gens[s][k].to_string(), term: t.to_raw(&self.dst.sig) });
            }
        }
        RawMorphism { src: self.src.to_raw(), dst: self.dst.to_raw(), assign }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawAssign {
    pub gen: String,
    pub term: RawTerm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub src: RawComputad,
    pub dst: RawComputad,
    #[serde(default)]
    pub assign: Vec<RawAssign>,
}

pub fn validate_morphism(raw: &RawMorphism) -> Result<ComputadMorphism> {
    let src = Arc::new(validate_computad(&raw.src)?);
    if validate_signature(&raw.dst.signature)? != *src.sig {
        return Err(Error::BaseMismatch);
    }
    let dst = Arc::new(validate_computad_on(&raw.dst, src.sig.clone())?);
    let mut map = BTreeMap::new();
    for a in &raw.assign {
        if map.insert(name(&a.gen), Term::from_raw(&a.term, &dst.sig)?).is_some() {
            return Err(Error::DuplicateId(a.gen.clone()));
        }
    }
    ComputadMorphism::from_names(src, dst, &map)
}

/// Partial generator maps used by the variable-to-variable searches.
pub type VarMap = Vec<Vec<Option<usize>>>;

fn empty_var_map(c: &Computad) -> VarMap {
    c.gens.iter().map(|g| vec![None; g.len()]).collect()
}

fn rename(map: &VarMap, a: &Computad, c: &Computad, t: &Term) -> Option<Term> {
    t.bind(&mut |g: &Name| {
        let (s, k) = a.index[g];
        map[s][k].map(|v| Term::Var(c.gens[s][v].clone())).ok_or(())
    })
    .ok()
}

fn fits(map: &VarMap, a: &Computad, c: &Computad, s: usize, k: usize, v: usize) -> bool {
    a.gluing[s][k].iter().zip(&c.gluing[s][v]).all(|(ga, gc)| rename(map, a, c, ga).as_ref() == Some(gc))
}

fn var_search(
    order: &[(usize, usize)],
    pos: usize,
    a: &Computad,
    c: &Computad,
    injective: bool,
    map: &mut VarMap,
    used: &mut Vec<Vec<bool>>,
    out: &mut Vec<VarMap>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if pos == order.len() {
        out.push(map.clone());
        return;
    }
    let (s, k) = order[pos];
    for v in 0..c.gens[s].len() {
        if injective && used[s][v] {
            continue;
        }
        if !fits(map, a, c, s, k, v) {
            continue;
        }
        map[s][k] = Some(v);
        used[s][v] = true;
        var_search(order, pos + 1, a, c, injective, map, used, out, limit);
        used[s][v] = false;
        map[s][k] = None;
    }
}

fn var_maps(exec: Exec, a: &Computad, c: &Computad, injective: bool, limit: usize) -> Vec<Vec<Vec<usize>>> {
    let base = a.base();
    let order: Vec<(usize, usize)> =
        base.sorts_by_dim().iter().flat_map(|&s| (0..a.gens[s].len()).map(move |k| (s, k))).collect();
    let finish = |m: VarMap| m.into_iter().map(|ks| ks.into_iter().map(|k| k.expect("total")).collect()).collect();
    if order.is_empty() {
        return vec![a.gens.iter().map(|_| Vec::new()).collect()];
    }
    let (s0, k0) = order[0];
    let chunks = par::map(exec, (0..c.gens[s0].len()).collect(), |v| {
        let mut map = empty_var_map(a);
        let mut used: Vec<Vec<bool>> = c.gens.iter().map(|g| vec![false; g.len()]).collect();
        let mut out = Vec::new();
        if fits(&map, a, c, s0, k0, v) {
            map[s0][k0] = Some(v);
            used[s0][v] = true;
            var_search(&order, 1, a, c, injective, &mut map, &mut used, &mut out, limit);
        }
        out
    });
    chunks.into_iter().flatten().take(limit).map(finish).collect()
}

/// All variable-to-variable morphisms `a -> c`, in lexicographic order of
/// generator images.
pub fn hom_var(a: &Arc<Computad>, c: &Arc<Computad>) -> Result<Vec<ComputadMorphism>> {
    hom_var_with(Exec::default(), a, c)
}

pub fn hom_var_with(exec: Exec, a: &Arc<Computad>, c: &Arc<Computad>) -> Result<Vec<ComputadMorphism>> {
    if !same_signature(&a.sig, &c.sig) {
        return Err(Error::BaseMismatch);
    }
    Ok(var_maps(exec, a, c, false, usize::MAX)
        .into_iter()
        .map(|m| {
            let assign = (0..m.len()).map(|s| m[s].iter().map(|&v| Term::Var(c.gens[s][v].clone())).collect()).collect();
            ComputadMorphism::new_unchecked(a.clone(), c.clone(), assign)
        })
        .collect())
}

/// A generator bijection respecting gluings, if one exists.
pub fn find_isomorphism(a: &Arc<Computad>, c: &Arc<Computad>) -> Option<ComputadMorphism> {
    if !same_signature(&a.sig, &c.sig) || (0..a.gens.len()).any(|s| a.gens[s].len() != c.gens[s].len()) {
        return None;
    }
    let m = var_maps(Exec::Sequential, a, c, true, 1).pop()?;
    let assign = (0..m.len()).map(|s| m[s].iter().map(|&v| Term::Var(c.gens[s][v].clone())).collect()).collect();
    Some(ComputadMorphism::new_unchecked(a.clone(), c.clone(), assign))
}

pub fn is_isomorphic(a: &Arc<Computad>, c: &Arc<Computad>) -> bool {
    find_isomorphism(a, c).is_some()
}

/// Extends `map` so that renaming `t` along it gives `s`, descending into
/// gluings of newly matched generators. Fails on a structural mismatch.
pub fn match_var(a: &Computad, t: &Term, c: &Computad, s: &Term, map: &mut VarMap) -> bool {
    match (t, s) {
        (Term::Var(x), Term::Var(y)) => {
            let (Ok((sx, kx)), Ok((sy, ky))) = (a.gen_index(x), c.gen_index(y)) else { return false };
            if sx != sy {
                return false;
            }
            match map[sx][kx] {
                Some(v) => v == ky,
                None => {
                    map[sx][kx] = Some(ky);
                    let ga = a.gluing[sx][kx].clone();
                    let gc = c.gluing[sy][ky].clone();
                    ga.iter().zip(&gc).all(|(p, q)| match_var(a, p, c, q, map))
                }
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(p, q)| match_var(a, p, c, q, map))
        }
        _ => false,
    }
}

/// The variable-to-variable morphism `a -> c` carrying `t` to `s`, provided
/// `t` mentions every generator of `a`.
pub fn morphism_matching(a: &Arc<Computad>, t: &Term, c: &Arc<Computad>, s: &Term) -> Option<ComputadMorphism> {
    let mut map = empty_var_map(a);
    if !match_var(a, t, c, s, &mut map) {
        return None;
    }
    let assign = map
        .iter()
        .enumerate()
        .map(|(srt, ks)| ks.iter().map(|k| k.map(|v| Term::Var(c.gens[srt][v].clone()))).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some(ComputadMorphism::new_unchecked(a.clone(), c.clone(), assign))
}

/// A finite diagram of computads and variable-to-variable morphisms.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub nodes: Vec<(String, Arc<Computad>)>,
    pub edges: Vec<(usize, usize, ComputadMorphism)>,
}

impl Diagram {
    pub fn node(&mut self, label: impl Into<String>, c: Arc<Computad>) -> usize {
        self.nodes.push((label.into(), c));
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, from: usize, to: usize, m: ComputadMorphism) {
        self.edges.push((from, to, m));
    }
}

#[derive(Clone, Debug)]
pub struct Colimit {
    pub apex: Arc<Computad>,
    pub legs: Vec<ComputadMorphism>,
    /// For each generator of the apex, a representative `(node, sort, index)`.
    reps: Vec<Vec<Vec<(usize, usize, usize)>>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Colimit of a diagram of variable-to-variable morphisms, computed on
/// generator sets sort by sort.
pub fn colimit_var(diagram: &Diagram) -> Result<Colimit> {
    let Some((_, first)) = diagram.nodes.first() else {
        return Err(Error::Malformed("colimit of an empty diagram needs a signature".into()));
    };
    let sig = first.sig.clone();
    if diagram.nodes.iter().any(|(_, c)| !same_signature(&c.sig, &sig)) {
        return Err(Error::BaseMismatch);
    }
    let mut elems: Vec<(usize, usize, usize)> = Vec::new();
    let mut offset: Vec<Vec<usize>> = Vec::new();
    for (n, (_, c)) in diagram.nodes.iter().enumerate() {
        let mut offs = Vec::new();
        for s in 0..c.gens.len() {
            offs.push(elems.len());
            elems.extend((0..c.gens[s].len()).map(|k| (n, s, k)));
        }
        offset.push(offs);
    }
    let mut uf = UnionFind((0..elems.len()).collect());
    for (from, to, m) in &diagram.edges {
        let (from, to) = (*from, *to);
        if from >= diagram.nodes.len() || to >= diagram.nodes.len() {
            return Err(Error::BadIndex(format!("edge {from} -> {to}")));
        }
        if !(Arc::ptr_eq(&m.src, &diagram.nodes[from].1) || *m.src == *diagram.nodes[from].1)
            || !(Arc::ptr_eq(&m.dst, &diagram.nodes[to].1) || *m.dst == *diagram.nodes[to].1)
        {
            return Err(Error::EndpointMismatch);
        }
        let vm = m.var_map().ok_or_else(|| {
            Error::NotVarToVar(format!("edge {} -> {}", diagram.nodes[from].0, diagram.nodes[to].0))
        })?;
        for s in 0..vm.len() {
            for (k, &v) in vm[s].iter().enumerate() {
                uf.union(offset[from][s] + k, offset[to][s] + v);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 0..elems.len() {
        classes.entry(uf.find(e)).or_default().push(e);
    }
    let qualified = |e: usize| {
        let (n, s, k) = elems[e];
        format!("{}.{}", diagram.nodes[n].0, diagram.nodes[n].1.gens[s][k])
    };
    let plain = |e: usize| {
        let (n, s, k) = elems[e];
        diagram.nodes[n].1.gens[s][k].to_string()
    };
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    for (&root, members) in &classes {
        let first = plain(members[0]);
        let n = if members.iter().all(|&e| plain(e) == first) {
            first
        } else {
            members.iter().map(|&e| qualified(e)).min().expect("nonempty")
        };
        names.insert(root, n);
    }
    let mut seen = std::collections::HashSet::new();
    if !names.values().all(|n| seen.insert(n.clone())) {
        for (&root, members) in &classes {
            names.insert(root, members.iter().map(|&e| qualified(e)).min().expect("nonempty"));
        }
    }
    let elem_name: Vec<Name> = (0..elems.len()).map(|e| name(&names[&uf.find(e)])).collect();
    let rename_in = |n: usize, t: &Term| -> Term {
        let c = &diagram.nodes[n].1;
        t.map_vars(&mut |g: &Name| {
            let (s, k) = c.index[g];
            elem_name[offset[n][s] + k].clone()
        })
    };
    let base = sig.base().clone();
    let mut specs = Vec::new();
    for (&root, members) in &classes {
        let _ = root;
        let (n, s, k) = elems[members[0]];
        let c = &diagram.nodes[n].1;
        let gluing = base.faces_into(s).iter().zip(&c.gluing[s][k]).map(|(&d, t)| (d, rename_in(n, t))).collect();
        specs.push(GenSpec { name: elem_name[members[0]].clone(), sort: s, gluing });
    }
    let apex = Arc::new(Computad::new(sig, specs)?);
    let legs = diagram
        .nodes
        .iter()
        .enumerate()
        .map(|(n, (_, c))| {
            let assign = (0..c.gens.len())
                .map(|s| (0..c.gens[s].len()).map(|k| Term::Var(elem_name[offset[n][s] + k].clone())).collect())
                .collect();
            ComputadMorphism::new_unchecked(c.clone(), apex.clone(), assign)
        })
        .collect();
    let mut reps: Vec<Vec<Vec<(usize, usize, usize)>>> = apex.gens.iter().map(|g| vec![Vec::new(); g.len()]).collect();
    for e in 0..elems.len() {
        let (s, k) = apex.index[&elem_name[e]];
        reps[s][k].push(elems[e]);
    }
    Ok(Colimit { apex, legs, reps })
}

impl Colimit {
    /// The unique morphism out of the apex through which `cocone` factors.
    pub fn induced(&self, diagram: &Diagram, cocone: &[ComputadMorphism]) -> Result<ComputadMorphism> {
        if cocone.len() != diagram.nodes.len() {
            return Err(Error::Malformed("cocone must have one leg per node".into()));
        }
        let target = cocone
            .first()
            .map(|m| m.dst.clone())
            .ok_or_else(|| Error::Malformed("empty cocone".into()))?;
        let mut assign = Vec::new();
        for s in 0..self.apex.gens.len() {
            let mut row = Vec::new();
            for (k, members) in self.reps[s].iter().enumerate() {
                let (n0, s0, k0) = members[0];
                let value = cocone[n0].assign[s0][k0].clone();
                for &(n, s1, k1) in &members[1..] {
                    if cocone[n].assign[s1][k1] != value {
                        return Err(Error::NotCompatible(format!(
                            "cocone legs disagree on the class of `{}`",
                            self.apex.gens[s][k]
                        )));
                    }
                }
                row.push(value);
            }
            assign.push(row);
        }
        let m = ComputadMorphism::new(self.apex.clone(), target, assign)?;
        for (n, leg) in self.legs.iter().enumerate() {
            if leg.then(&m)?.assign != cocone[n].assign {
                return Err(Error::NotCompatible(format!("leg {} does not factor", diagram.nodes[n].0)));
            }
        }
        Ok(m)
    }
}
