//! Algebras: carriers with interpretations of every function symbol, term
//! evaluation, morphism checking and the free algebra on a computad.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{name, Name};
use crate::computad::Computad;
use crate::enumerate::{term_levels, TermLevels};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::presheaf::{enumerate_maps, same_base, validate_presheaf_on, CellTable, Presheaf, PresheafMorphism, RawPresheaf};
use crate::signature::{validate_signature, FunctionSymbol, RawSignature, Signature};
use crate::term::{boundary, Context, Term};

/// Something that interprets a signature: cells per sort, a face action and
/// an interpretation of every symbol.
pub trait AlgebraView: Sync {
    type Cell: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn signature(&self) -> &Signature;

    fn cells(&self, sort: usize) -> Result<Vec<Self::Cell>>;

    fn face(&self, face: usize, c: &Self::Cell) -> Result<Self::Cell>;

    /// `f^X` applied to a configuration given in the flat order of the arity.
    fn interpret(&self, f: &FunctionSymbol, args: &[Self::Cell]) -> Result<Self::Cell>;

    fn label(&self, c: &Self::Cell) -> String;
}

/// Evaluates a term, sending variables through `env`.
pub fn eval<A: AlgebraView + ?Sized, V: Clone>(
    alg: &A,
    t: &Term<V>,
    env: &mut dyn FnMut(&V) -> Result<A::Cell>,
) -> Result<A::Cell> {
    match t {
        Term::Var(v) => env(v),
        Term::App(s, args) => {
            let vals = args.iter().map(|a| eval(alg, a, env)).collect::<Result<Vec<_>>>()?;
            alg.interpret(alg.signature().symbol(s)?, &vals)
        }
    }
}

#[derive(Clone)]
pub enum Interpretation {
    /// Flat arity configuration to output cell index.
    Table(HashMap<Vec<usize>, usize>),
    /// Computed on demand; validated on every configuration like a table.
    Oracle(Arc<dyn Fn(&[usize]) -> usize + Send + Sync>),
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpretation::Table(t) => write!(f, "Table({} rows)", t.len()),
            Interpretation::Oracle(_) => write!(f, "Oracle"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Algebra {
    sig: Arc<Signature>,
    carrier: Arc<Presheaf>,
    /// Indexed like `sig.symbols()`.
    interp: Vec<Interpretation>,
}

/// All configurations of an arity in a carrier, in flat order.
pub fn configurations(arity: &Presheaf, carrier: &Presheaf) -> Vec<Vec<usize>> {
    enumerate_maps(arity, &CellTable::from_presheaf(carrier), Exec::default())
}

impl Algebra {
    /// Checks totality and the boundary condition
    /// `δ*(f(x)) = eval(t_{f,δ}, x)` for every configuration `x`.
    pub fn new(sig: Arc<Signature>, carrier: Arc<Presheaf>, interps: Vec<(Name, Interpretation)>) -> Result<Algebra> {
        if !same_base(sig.base(), carrier.base()) {
            return Err(Error::BaseMismatch);
        }
        let mut slots: Vec<Option<Interpretation>> = vec![None; sig.symbols().len()];
        for (id, i) in interps {
            let k = sig.symbol_index(&id)?;
            if slots[k].replace(i).is_some() {
                return Err(Error::DuplicateId(id.to_string()));
            }
        }
        let interp = slots
            .into_iter()
            .zip(sig.symbols())
            .map(|(i, f)| i.ok_or_else(|| Error::PartialTable(format!("no interpretation for `{}`", f.id))))
            .collect::<Result<Vec<_>>>()?;
        let alg = Algebra { sig, carrier, interp };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let base = self.sig.base();
        for (k, f) in self.sig.symbols().iter().enumerate() {
            let inputs = configurations(f.arity(), &self.carrier);
            if let Interpretation::Table(t) = &self.interp[k] {
                if t.len() > inputs.len() || t.keys().any(|row| inputs.binary_search(row).is_err()) {
                    return Err(Error::PartialTable(format!("`{}` has a row that is not a configuration of its arity", f.id)));
                }
            }
            for x in &inputs {
                let v = self.interpret(f, x)?;
                for (&d, bt) in base.faces_into(f.sort).iter().zip(f.boundary_ix()) {
                    let lhs = self.carrier.act(d, v);
                    let rhs = eval(self, bt, &mut |&n: &usize| Ok(x[n]))?;
                    if lhs != rhs {
                        return Err(Error::BoundaryConditionFailure(format!(
                            "`{}` on {}: {}* of the value is `{}` but the boundary term evaluates to `{}`",
                            f.id,
                            self.describe(f, x),
                            base.face(d).id,
                            self.carrier.cell_name(base.face(d).src, lhs),
                            self.carrier.cell_name(base.face(d).src, rhs)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn describe(&self, f: &FunctionSymbol, x: &[usize]) -> String {
        let a = f.arity();
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .map(|(n, &v)| {
                let (s, k) = a.unflat(n);
                format!("{}={}", a.cell_name(s, k), self.carrier.cell_name(s, v))
            })
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn carrier(&self) -> &Arc<Presheaf> {
        &self.carrier
    }

    pub fn interpretation(&self, symbol: &str) -> Result<&Interpretation> {
        Ok(&self.interp[self.sig.symbol_index(symbol)?])
    }

    /// Evaluates a term over the free computad on the carrier.
    pub fn eval_term(&self, t: &Term) -> Result<(usize, usize)> {
        let ctx = crate::signature::FreeContext { signature: &self.sig, arity: &self.carrier };
        let sort = crate::term::check_term(&ctx, t)?;
        let v = eval(self, t, &mut |c: &Name| Ok(self.carrier.cell_index(c)?.1))?;
        Ok((sort, v))
    }

    pub fn to_raw(&self) -> RawAlgebra {
        let interpretations = self
            .sig
            .symbols()
            .iter()
            .map(|f| {
                let a = f.arity();
                let rows = configurations(a, &self.carrier)
                    .into_iter()
                    .map(|x| {
                        let v = self.interpret(f, &x).expect("validated");
                        RawRow {
                            hom: x
                                .iter()
                                .enumerate()
                                .map(|(n, &c)| {
                                    let (s, k) = a.unflat(n);
                                    (a.cell_name(s, k).to_string(), self.carrier.cell_name(s, c).to_string())
                                })
                                .collect(),
                            value: self.carrier.cell_name(f.sort, v).to_string(),
                        }
                    })
                    .collect();
                RawInterpretation { symbol: f.id.to_string(), rows }
            })
            .collect();
        RawAlgebra { signature: self.sig.to_raw(), carrier: self.carrier.to_raw(false), interpretations }
    }
}

impl AlgebraView for Algebra {
    type Cell = usize;

    fn signature(&self) -> &Signature {
        &self.sig
    }

    fn cells(&self, sort: usize) -> Result<Vec<usize>> {
        Ok((0..self.carrier.cell_count(sort)).collect())
    }

    fn face(&self, face: usize, c: &usize) -> Result<usize> {
        Ok(self.carrier.act(face, *c))
    }

    fn interpret(&self, f: &FunctionSymbol, args: &[usize]) -> Result<usize> {
        let k = self.sig.symbol_index(&f.id)?;
        let v = match &self.interp[k] {
            Interpretation::Table(t) => *t
                .get(args)
                .ok_or_else(|| Error::PartialTable(format!("`{}` has no row for {}", f.id, self.describe(f, args))))?,
            Interpretation::Oracle(o) => o(args),
        };
        if v >= self.carrier.cell_count(f.sort) {
            return Err(Error::BadIndex(format!("`{}` returned cell #{v}", f.id)));
        }
        Ok(v)
    }

    fn label(&self, c: &usize) -> String {
        c.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub hom: BTreeMap<String, String>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawInterpretation {
    pub symbol: String,
    #[serde(default)]
    pub rows: Vec<RawRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawAlgebra {
    pub signature: RawSignature,
    pub carrier: RawPresheaf,
    #[serde(default)]
    pub interpretations: Vec<RawInterpretation>,
}

pub fn validate_algebra(raw: &RawAlgebra) -> Result<Algebra> {
    let sig = Arc::new(validate_signature(&raw.signature)?);
    let carrier = Arc::new(validate_presheaf_on(&raw.carrier, sig.base().clone())?);
    let mut interps = Vec::new();
    for ri in &raw.interpretations {
        let f = sig.symbol(&ri.symbol)?;
        let a = f.arity();
        let mut table = HashMap::new();
        for row in &ri.rows {
            let mut x = vec![usize::MAX; a.total()];
            for (cell, val) in &row.hom {
                let (s, k) = a.cell_index(cell)?;
                let (s2, v) = carrier.cell_index(val)?;
                if s2 != s {
                    return Err(Error::SortMismatch(format!("`{}`: cell `{cell}` sent to `{val}`", ri.symbol)));
                }
                x[a.flat(s, k)] = v;
            }
            if x.contains(&usize::MAX) {
                return Err(Error::PartialTable(format!("`{}`: a row does not cover the arity", ri.symbol)));
            }
            let (s, v) = carrier.cell_index(&row.value)?;
            if s != f.sort {
                return Err(Error::SortMismatch(format!("`{}` valued in `{}`", ri.symbol, row.value)));
            }
            if table.insert(x, v).is_some() {
                return Err(Error::DuplicateId(format!("row of `{}`", ri.symbol)));
            }
        }
        interps.push((f.id.clone(), Interpretation::Table(table)));
    }
    Algebra::new(sig, carrier, interps)
}

/// The first place where a carrier map fails to commute with an interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub symbol: Name,
    pub input: BTreeMap<String, String>,
}

/// Checks `σ ∘ f^X = f^Y(σ ∘ -)` on every configuration.
pub fn check_algebra_morphism(a: &Algebra, b: &Algebra, sigma: &PresheafMorphism) -> Result<Option<Violation>> {
    if !same_base(a.sig.base(), b.sig.base()) || !same_base(sigma.src.base(), a.sig.base()) {
        return Err(Error::BaseMismatch);
    }
    if *sigma.src != *a.carrier || *sigma.dst != *b.carrier {
        return Err(Error::EndpointMismatch);
    }
    for f in a.sig.symbols() {
        let g = b.sig.symbol(&f.id)?;
        let ar = f.arity();
        for x in configurations(ar, &a.carrier) {
            let lhs = sigma.apply(f.sort, a.interpret(f, &x)?);
            let y: Vec<usize> = x.iter().enumerate().map(|(n, &v)| sigma.apply(ar.unflat(n).0, v)).collect();
            if lhs != b.interpret(g, &y)? {
                let input = x
                    .iter()
                    .enumerate()
                    .map(|(n, &v)| {
                        let (s, k) = ar.unflat(n);
                        (ar.cell_name(s, k).to_string(), a.carrier.cell_name(s, v).to_string())
                    })
                    .collect();
                return Ok(Some(Violation { symbol: f.id.clone(), input }));
            }
        }
    }
    Ok(None)
}

/// Values of a morphism from a computad to an algebra on generators; every
/// term is then evaluated recursively.
#[derive(Clone, Debug)]
pub struct GeneratorMap<T> {
    pub computad: Arc<Computad>,
    /// `[sort][generator]`
    pub values: Vec<Vec<T>>,
}

impl<T: Clone + Eq + fmt::Debug> GeneratorMap<T> {
    pub fn value(&self, g: &str) -> Result<T> {
        let (s, k) = self.computad.gen_index(g)?;
        Ok(self.values[s][k].clone())
    }

    pub fn eval<A: AlgebraView<Cell = T> + ?Sized>(&self, alg: &A, t: &Term) -> Result<T> {
        eval(alg, t, &mut |g: &Name| self.value(g))
    }
}

/// The unique extension of a generator assignment to all terms, provided
/// `δ*ρ(v) = ρ(φ_δ v)` holds for every generator.
pub fn morphism_from_generators<A: AlgebraView + ?Sized>(
    c: &Arc<Computad>,
    alg: &A,
    values: Vec<Vec<A::Cell>>,
) -> Result<GeneratorMap<A::Cell>> {
    let base = c.base().clone();
    if values.len() != base.sort_count() || (0..values.len()).any(|s| values[s].len() != c.gen_count(s)) {
        return Err(Error::Malformed("assignment does not cover the generators".into()));
    }
    let m = GeneratorMap { computad: c.clone(), values };
    for &s in base.sorts_by_dim() {
        for k in 0..c.gen_count(s) {
            for (&d, glue) in base.faces_into(s).iter().zip(c.gluing_family(s, k)) {
                let lhs = alg.face(d, &m.values[s][k])?;
                let rhs = m.eval(alg, glue)?;
                if lhs != rhs {
                    return Err(Error::BoundaryConditionFailure(format!(
                        "`{}`: {}* of its value is {} but its gluing evaluates to {}",
                        c.gen_name(s, k),
                        base.face(d).id,
                        alg.label(&lhs),
                        alg.label(&rhs)
                    )));
                }
            }
        }
    }
    Ok(m)
}

/// Assignments by generator name into a finite algebra.
pub fn morphism_from_names(c: &Arc<Computad>, alg: &Algebra, assign: &BTreeMap<String, String>) -> Result<GeneratorMap<usize>> {
    let values = (0..c.base().sort_count())
        .map(|s| {
            c.gens(s)
                .iter()
                .map(|g| {
                    let cell = assign.get(g.as_ref()).ok_or_else(|| Error::UnknownGenerator(format!("no value for `{g}`")))?;
                    let (s2, v) = alg.carrier.cell_index(cell)?;
                    if s2 != s {
                        return Err(Error::SortMismatch(format!("`{g}` sent to `{cell}`")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    morphism_from_generators(c, alg, values)
}

/// The free algebra on a computad, seen through terms of bounded depth.
pub struct FreeAlgebra {
    computad: Arc<Computad>,
    depth: usize,
    /// Computed one level past the bound to detect saturation.
    levels: TermLevels<Name>,
}

impl FreeAlgebra {
    pub fn new(computad: Arc<Computad>, depth: usize) -> Result<FreeAlgebra> {
        let levels = term_levels(&*computad, depth + 1)?;
        Ok(FreeAlgebra { computad, depth, levels })
    }

    pub fn computad(&self) -> &Arc<Computad> {
        &self.computad
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// True when no term exceeds the bound, so the view is the whole algebra.
    pub fn is_exact(&self) -> bool {
        self.levels.saturated(&(0..self.computad.base().sort_count()).collect::<Vec<_>>())
    }

    /// A finite algebra with the same cells, provided the bounded term sets
    /// are closed under boundaries and interpretations.
    pub fn materialise(&self) -> Result<Algebra> {
        let base = self.computad.base().clone();
        let n = base.sort_count();
        let cells: Vec<Vec<Term>> = (0..n).map(|s| self.levels.at(self.depth, s).to_vec()).collect();
        let names: HashMap<&Term, Name> = cells.iter().flatten().map(|t| (t, name(&t.to_string()))).collect();
        let by_name: HashMap<Name, &Term> = names.iter().map(|(t, nm)| (nm.clone(), *t)).collect();
        let missing = std::cell::Cell::new(false);
        let carrier = Presheaf::from_fn(base.clone(), cells.iter().map(|ts| ts.iter().map(|t| names[t].clone()).collect()).collect(), |f, c| {
            let b = boundary(&*self.computad, f, by_name[c]).ok()?;
            let r = names.get(&b).cloned();
            missing.set(missing.get() || r.is_none());
            r
        });
        let carrier = match carrier {
            Ok(c) => Arc::new(c),
            Err(_) if missing.get() => return Err(Error::DepthExceeded(self.depth)),
            Err(e) => return Err(e),
        };
        let index = |t: &Term| -> Result<usize> {
            names.get(t).map(|nm| carrier.cell_index(nm).expect("named").1).ok_or(Error::DepthExceeded(self.depth))
        };
        let mut interps = Vec::new();
        for f in self.computad.signature().symbols() {
            let a = f.arity();
            let mut table = HashMap::new();
            for x in configurations(a, &carrier) {
                let args: Vec<Term> = x
                    .iter()
                    .enumerate()
                    .map(|(n, &v)| {
                        let s = a.unflat(n).0;
                        by_name[carrier.cell_name(s, v)].clone()
                    })
                    .collect();
                let v = index(&Term::App(f.id.clone(), args.into()))?;
                table.insert(x, v);
            }
            interps.push((f.id.clone(), Interpretation::Table(table)));
        }
        Algebra::new(self.computad.signature_arc().clone(), carrier, interps)
    }
}

impl AlgebraView for FreeAlgebra {
    type Cell = Term;

    fn signature(&self) -> &Signature {
        self.computad.signature()
    }

    fn cells(&self, sort: usize) -> Result<Vec<Term>> {
        Ok(self.levels.at(self.depth, sort).to_vec())
    }

    fn face(&self, face: usize, c: &Term) -> Result<Term> {
        boundary(&*self.computad, face, c)
    }

    fn interpret(&self, f: &FunctionSymbol, args: &[Term]) -> Result<Term> {
        let t = Term::App(f.id.clone(), args.to_vec().into());
        if t.depth() > self.depth {
            return Err(Error::DepthExceeded(self.depth));
        }
        crate::term::check_args(&*self.computad, &f.id, args)?;
        Ok(t)
    }

    fn label(&self, c: &Term) -> String {
        c.to_string()
    }
}
