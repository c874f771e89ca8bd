//! Boundary inclusions, skeletal filtrations, the underlying computad of an
//! algebra at bounded depth, and trivial-fibration checks.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use crate::algebra::{morphism_from_generators, Algebra, AlgebraView, GeneratorMap};
use crate::category::{name, Name};
use crate::computad::{colimit_var, free_computad, is_isomorphic, Computad, ComputadMorphism, Diagram, GenSpec};
use crate::enumerate::{level_table, term_levels};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::plex::boundary_shape;
use crate::presheaf::{boundary_representable, enumerate_maps, representable, CellTable};
use crate::signature::Signature;
use crate::term::{boundary, check_cocycle, check_term, sort_of, Term};

/// `∂𝔻^i → 𝔻^i`.
pub fn boundary_inclusion(sig: &Arc<Signature>, sort: &str) -> Result<ComputadMorphism> {
    let base = sig.base();
    let disk = Arc::new(free_computad(&representable(base, sort)?, sig.clone())?);
    let (bd, _) = boundary_representable(base, sort)?;
    let bd = Arc::new(free_computad(&bd, sig.clone())?);
    let assign = (0..base.sort_count()).map(|s| bd.gens(s).iter().map(|g| Term::Var(g.clone())).collect()).collect();
    ComputadMorphism::new(bd, disk, assign)
}

/// One generator added at a stage: `φ` classifies its boundary in the
/// previous stage and `ψ` the generator itself in the current one.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub name: Name,
    pub sort: usize,
    pub phi: ComputadMorphism,
    pub psi: ComputadMorphism,
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub dim: usize,
    pub computad: Arc<Computad>,
    pub attached: Vec<Attachment>,
}

#[derive(Clone, Debug)]
pub struct SkeletalFiltration {
    pub signature: Arc<Signature>,
    pub stages: Vec<Stage>,
}

fn below(c: &Computad, keep: impl Fn(usize) -> bool) -> Result<Arc<Computad>> {
    let specs = c.specs().into_iter().filter(|g| keep(g.sort)).collect();
    Ok(Arc::new(Computad::new(c.signature_arc().clone(), specs)?))
}

/// Stages `sk_{≤d} C` for each dimension `d` carrying generators.
pub fn skeletal_filtration(c: &Computad) -> Result<SkeletalFiltration> {
    let sig = c.signature_arc().clone();
    let base = c.base().clone();
    let mut incl: HashMap<usize, ComputadMorphism> = HashMap::new();
    let mut prev = Arc::new(Computad::empty(sig.clone()));
    let mut stages = Vec::new();
    for d in base.dims() {
        let sorts: Vec<usize> = (0..base.sort_count()).filter(|&s| base.dim(s) == d && c.gen_count(s) > 0).collect();
        if sorts.is_empty() {
            continue;
        }
        let cur = below(c, |s| base.dim(s) <= d)?;
        let mut attached = Vec::new();
        for &s in &sorts {
            let iota = match incl.entry(s) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(e) => e.insert(boundary_inclusion(&sig, &base.sort(s).id)?),
            };
            for (k, g) in c.gens(s).iter().enumerate() {
                let glue: BTreeMap<&str, &Term> = base
                    .faces_into(s)
                    .iter()
                    .zip(c.gluing_family(s, k))
                    .map(|(&f, t)| (&*base.face(f).id, t))
                    .collect();
                let phi_assign = (0..base.sort_count())
                    .map(|s2| iota.src().gens(s2).iter().map(|h| glue[&**h].clone()).collect())
                    .collect();
                let phi = ComputadMorphism::new(iota.src().clone(), prev.clone(), phi_assign)?;
                let psi_assign = (0..base.sort_count())
                    .map(|s2| {
                        iota.dst()
                            .gens(s2)
                            .iter()
                            .map(|h| glue.get(&**h).map(|t| (*t).clone()).unwrap_or_else(|| Term::Var(g.clone())))
                            .collect()
                    })
                    .collect();
                let psi = ComputadMorphism::new(iota.dst().clone(), cur.clone(), psi_assign)?;
                attached.push(Attachment { name: g.clone(), sort: s, phi, psi });
            }
        }
        stages.push(Stage { dim: d, computad: cur.clone(), attached });
        prev = cur;
    }
    Ok(SkeletalFiltration { signature: sig, stages })
}

/// Adds one generator per attachment, glued along the image of `φ`.
pub fn attach_cells(prev: &Arc<Computad>, attached: &[Attachment]) -> Result<Computad> {
    let base = prev.base().clone();
    let mut specs = prev.specs();
    for a in attached {
        let gluing = base
            .faces_into(a.sort)
            .iter()
            .map(|&f| Ok((f, a.phi.image(&base.face(f).id)?.clone())))
            .collect::<Result<Vec<_>>>()?;
        specs.push(GenSpec { name: a.name.clone(), sort: a.sort, gluing });
    }
    Computad::new(prev.signature_arc().clone(), specs)
}

/// The pushout of `prev ← ⊔∂𝔻 → ⊔𝔻` as a variable-to-variable colimit;
/// `None` when some attaching map is not variable-to-variable.
pub fn attaching_pushout(prev: &Arc<Computad>, attached: &[Attachment]) -> Result<Option<Arc<Computad>>> {
    if attached.iter().any(|a| !a.phi.is_var_to_var()) {
        return Ok(None);
    }
    let sig = prev.signature_arc();
    let mut d = Diagram::default();
    let root = d.node("C", prev.clone());
    for a in attached {
        let iota = boundary_inclusion(sig, &sig.base().sort(a.sort).id)?;
        let phi = ComputadMorphism::new(iota.src().clone(), prev.clone(), a.phi.assignment().to_vec())?;
        let b = d.node(format!("d{}", a.name), iota.src().clone());
        let top = d.node(format!("D{}", a.name), iota.dst().clone());
        d.edge(b, root, phi);
        d.edge(b, top, iota);
    }
    Ok(Some(colimit_var(&d)?.apex))
}

/// Outcome of replaying a filtration from the empty computad.
#[derive(Clone, Debug)]
pub struct Replay {
    pub result: Arc<Computad>,
    /// Per stage: the attached computad matches the stage.
    pub stages_match: Vec<bool>,
    /// Per stage: the colimit agrees with the attachment, when computable.
    pub pushouts_match: Vec<Option<bool>>,
}

pub fn replay(f: &SkeletalFiltration) -> Result<Replay> {
    let mut cur = Arc::new(Computad::empty(f.signature.clone()));
    let mut stages_match = Vec::new();
    let mut pushouts_match = Vec::new();
    for st in &f.stages {
        let po = attaching_pushout(&cur, &st.attached)?;
        let next = Arc::new(attach_cells(&cur, &st.attached)?);
        pushouts_match.push(po.map(|p| is_isomorphic(&p, &next)));
        stages_match.push(is_isomorphic(&next, &st.computad));
        cur = next;
    }
    Ok(Replay { result: cur, stages_match, pushouts_match })
}

/// The underlying computad of an algebra, with generators `(T, x)` for
/// compatible boundary families `T` of bounded-depth terms and cells `x`
/// with `r(T) = ∂x`.
#[derive(Clone, Debug)]
pub struct Und {
    pub computad: Arc<Computad>,
    pub depth: usize,
    /// No generator was lost to the depth bound.
    pub exact: bool,
    /// `[sort][generator]`: the boundary family and the carrier cell.
    pub data: Vec<Vec<(Vec<Term>, usize)>>,
    keys: HashMap<(usize, Vec<Term>, usize), Name>,
}

fn und_name(alg: &Algebra, sort: usize, family: &[Term], x: usize) -> Name {
    let cell = alg.carrier().cell_name(sort, x);
    if family.is_empty() {
        return cell.clone();
    }
    let ts: Vec<String> = family.iter().map(Term::to_string).collect();
    name(&format!("{cell}({})", ts.join(",")))
}

pub fn underlying_computad(alg: &Algebra, depth: usize) -> Result<Und> {
    let sig = alg.signature_arc().clone();
    let base = sig.base().clone();
    let carrier = alg.carrier().clone();
    let n = base.sort_count();
    let mut specs: Vec<GenSpec> = Vec::new();
    let mut values: HashMap<Name, usize> = HashMap::new();
    let mut meta: HashMap<Name, (Vec<Term>, usize)> = HashMap::new();
    let mut exact = true;
    for d in base.dims() {
        let lower = Arc::new(Computad::new(sig.clone(), specs.clone())?);
        let levels = term_levels(&*lower, depth + 1)?;
        let terms: Vec<Vec<Term>> = (0..n).map(|s| levels.at(depth, s).to_vec()).collect();
        let table = level_table(&*lower, &terms)?;
        let r = GeneratorMap {
            computad: lower.clone(),
            values: (0..n).map(|s| lower.gens(s).iter().map(|g| values[g]).collect()).collect(),
        };
        let sorts: Vec<usize> = (0..n).filter(|&s| base.dim(s) == d).collect();
        for &s in &sorts {
            let srcs: Vec<usize> = base.faces_into(s).iter().map(|&f| base.face(f).src).collect();
            if !srcs.is_empty() && !levels.saturated(&srcs) {
                exact = false;
            }
        }
        let found = par::try_map(Exec::default(), sorts, |s| {
            let shape = boundary_shape(&sig, s)?;
            let into = base.faces_into(s);
            let mut by_boundary: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for x in 0..carrier.cell_count(s) {
                by_boundary.entry(into.iter().map(|&f| carrier.act(f, x)).collect()).or_default().push(x);
            }
            let mut out = Vec::new();
            for fam in enumerate_maps(&shape.presheaf, &table, Exec::Sequential) {
                let family: Vec<Term> = shape
                    .flat_of_face
                    .iter()
                    .map(|&fl| terms[shape.presheaf.unflat(fl).0][fam[fl]].clone())
                    .collect();
                let key = family.iter().map(|t| r.eval(alg, t)).collect::<Result<Vec<_>>>()?;
                for &x in by_boundary.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                    out.push((s, family.clone(), x));
                }
            }
            Ok(out)
        })?;
        for (s, family, x) in found.into_iter().flatten() {
            let g = und_name(alg, s, &family, x);
            let gluing = base.faces_into(s).iter().copied().zip(family.iter().cloned()).collect();
            specs.push(GenSpec { name: g.clone(), sort: s, gluing });
            values.insert(g.clone(), x);
            meta.insert(g, (family, x));
        }
    }
    let computad = Arc::new(Computad::new(sig, specs)?);
    let data: Vec<Vec<(Vec<Term>, usize)>> =
        (0..n).map(|s| computad.gens(s).iter().map(|g| meta[g].clone()).collect()).collect();
    let keys = (0..n)
        .flat_map(|s| computad.gens(s).iter().map(move |g| (s, g)))
        .map(|(s, g)| {
            let (t, x) = &meta[g];
            ((s, t.clone(), *x), g.clone())
        })
        .collect();
    Ok(Und { computad, depth, exact, data, keys })
}

impl Und {
    /// The counit `r`, sending each generator to its cell.
    pub fn counit(&self, alg: &Algebra) -> Result<GeneratorMap<usize>> {
        let values = self.data.iter().map(|v| v.iter().map(|(_, x)| *x).collect()).collect();
        morphism_from_generators(&self.computad, alg, values)
    }

    /// The generator term `v(i, T, x)`.
    pub fn lift_v(&self, alg: &Algebra, sort: usize, family: &[Term], x: usize) -> Result<Term> {
        let base = self.computad.base();
        let into = base.faces_into(sort);
        if family.len() != into.len() || x >= alg.carrier().cell_count(sort) {
            return Err(Error::NotCompatible("family or cell does not fit the sort".into()));
        }
        let r = self.counit(alg)?;
        for (&f, t) in into.iter().zip(family) {
            check_term(&*self.computad, t)?;
            if sort_of(&*self.computad, t)? != base.face(f).src {
                return Err(Error::NotCompatible(format!("term at `{}` has the wrong sort", base.face(f).id)));
            }
            if r.eval(alg, t)? != alg.carrier().act(f, x) {
                return Err(Error::NotCompatible(format!("r of the term at `{}` is not that face of the cell", base.face(f).id)));
            }
        }
        let fam: Vec<Term> = family.to_vec();
        if let Some((a, b)) = check_cocycle(base, sort, &fam, &mut |f, t| boundary(&*self.computad, f, t))? {
            return Err(Error::NotCompatible(format!(
                "family is not compatible along `{}` then `{}`",
                base.face(a).id,
                base.face(b).id
            )));
        }
        match self.keys.get(&(sort, fam, x)) {
            Some(g) => Ok(Term::Var(g.clone())),
            None => Err(Error::DepthExceeded(self.depth)),
        }
    }
}

/// A lifting problem without a solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub sort: usize,
    pub target: String,
    pub boundary: Vec<String>,
}

fn view_table<A: AlgebraView + ?Sized>(a: &A, cells: &[Vec<A::Cell>]) -> Result<CellTable> {
    let base = a.signature().base();
    let index: Vec<HashMap<&A::Cell, usize>> =
        cells.iter().map(|cs| cs.iter().enumerate().map(|(k, c)| (c, k)).collect()).collect();
    let action = base
        .faces()
        .iter()
        .enumerate()
        .map(|(f, fi)| {
            cells[fi.dst].iter().map(|c| Ok(index[fi.src].get(&a.face(f, c)?).copied())).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CellTable { counts: cells.iter().map(Vec::len).collect(), action })
}

/// Checks that `(σ, ∂): X_i → Y_i ×_{∂Y_i} ∂X_i` is onto for each listed
/// sort, over the cells the views expose.
pub fn check_trivial_fibration<A, B>(
    a: &A,
    b: &B,
    sigma: &(dyn Fn(usize, &A::Cell) -> Result<B::Cell> + Sync),
    sorts: &[usize],
) -> Result<Option<Counterexample>>
where
    A: AlgebraView + ?Sized,
    B: AlgebraView + ?Sized,
{
    let sig = a.signature();
    let base = sig.base();
    let n = base.sort_count();
    let xs = (0..n).map(|s| a.cells(s)).collect::<Result<Vec<_>>>()?;
    let table = view_table(a, &xs)?;
    for &i in sorts {
        let into = base.faces_into(i);
        let shape = boundary_shape(sig, i)?;
        let mut solved: HashSet<(B::Cell, Vec<A::Cell>)> = HashSet::new();
        for x in &xs[i] {
            let bd = into.iter().map(|&f| a.face(f, x)).collect::<Result<Vec<_>>>()?;
            solved.insert((sigma(i, x)?, bd));
        }
        let mut targets: HashMap<Vec<B::Cell>, Vec<B::Cell>> = HashMap::new();
        for y in b.cells(i)? {
            let bd = into.iter().map(|&f| b.face(f, &y)).collect::<Result<Vec<_>>>()?;
            targets.entry(bd).or_default().push(y);
        }
        for fam in enumerate_maps(&shape.presheaf, &table, Exec::default()) {
            let family: Vec<A::Cell> = shape
                .flat_of_face
                .iter()
                .map(|&fl| {
                    let (s, _) = shape.presheaf.unflat(fl);
                    xs[s][fam[fl]].clone()
                })
                .collect();
            let image = family
                .iter()
                .zip(into)
                .map(|(c, &f)| sigma(base.face(f).src, c))
                .collect::<Result<Vec<_>>>()?;
            for y in targets.get(&image).map(Vec::as_slice).unwrap_or(&[]) {
                if !solved.contains(&(y.clone(), family.clone())) {
                    return Ok(Some(Counterexample {
                        sort: i,
                        target: b.label(y),
                        boundary: family.iter().map(|c| a.label(c)).collect(),
                    }));
                }
            }
        }
    }
    Ok(None)
}
