//! Signatures: function symbols with arity presheaves and boundary terms.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{name, DirectCategory, Name, RawCategory};
use crate::error::{Error, Result};
use crate::presheaf::{same_base, validate_presheaf_on, Presheaf, RawPresheaf};
use crate::term::{check_cocycle, check_term, complete_family, sort_of, Context, RawTerm, Term};

#[derive(Clone, PartialEq, Eq)]
pub struct FunctionSymbol {
    pub id: Name,
    pub sort: usize,
    arity: Arc<Presheaf>,
    /// Indexed by position in `faces_into(sort)`.
    boundary: Vec<Term>,
    boundary_ix: Vec<Term<usize>>,
}

impl std::fmt::Debug for FunctionSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {:?} -> sort #{}", self.id, self.arity, self.sort)
    }
}

impl FunctionSymbol {
    pub fn arity(&self) -> &Arc<Presheaf> {
        &self.arity
    }

    pub fn boundary(&self) -> &[Term] {
        &self.boundary
    }

    /// Boundary terms with variables replaced by flat arity indices.
    pub fn boundary_ix(&self) -> &[Term<usize>] {
        &self.boundary_ix
    }
}

/// Terms over the free computad on an arity presheaf.
pub struct FreeContext<'a> {
    pub signature: &'a Signature,
    pub arity: &'a Presheaf,
}

impl Context for FreeContext<'_> {
    type Gen = Name;

    fn signature(&self) -> &Signature {
        self.signature
    }

    fn gen_sort(&self, g: &Name) -> Result<usize> {
        Ok(self.arity.cell_index(g)?.0)
    }

    fn gluing(&self, g: &Name, face: usize) -> Result<Term> {
        let (s, k) = self.arity.cell_index(g)?;
        if self.arity.base().face(face).dst != s {
            return Err(Error::SortMismatch(format!("face applied to cell `{g}` of another sort")));
        }
        let src = self.arity.base().face(face).src;
        Ok(Term::Var(self.arity.cell_name(src, self.arity.act(face, k)).clone()))
    }
}

impl crate::term::FiniteContext for FreeContext<'_> {
    fn generators(&self, sort: usize) -> Vec<Name> {
        self.arity.cells(sort).to_vec()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Signature {
    base: Arc<DirectCategory>,
    symbols: Vec<FunctionSymbol>,
    index: HashMap<Name, usize>,
    by_sort: Vec<Vec<usize>>,
}

impl std::fmt::Debug for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.symbols.iter().map(|s| &s.id)).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawBoundary {
    pub face: String,
    pub term: RawTerm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSymbol {
    pub id: String,
    pub sort: String,
    pub arity: RawPresheaf,
    #[serde(default)]
    pub boundary: Vec<RawBoundary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSignature {
    pub category: RawCategory,
    #[serde(default)]
    pub symbols: Vec<RawSymbol>,
}

/// A symbol awaiting validation. Boundary terms may be given on any subset
/// of faces from which the rest can be derived.
#[derive(Clone, Debug)]
pub struct SymbolSpec {
    pub id: Name,
    pub sort: usize,
    pub arity: Arc<Presheaf>,
    pub boundary: Vec<(usize, Term)>,
}

impl Signature {
    pub fn empty(base: Arc<DirectCategory>) -> Signature {
        let by_sort = vec![Vec::new(); base.sort_count()];
        Signature { base, symbols: Vec::new(), index: HashMap::new(), by_sort }
    }

    /// Validates symbols in increasing dimension of their output sort; each
    /// symbol sees only the symbols of strictly lower dimension.
    pub fn new(base: Arc<DirectCategory>, mut specs: Vec<SymbolSpec>) -> Result<Signature> {
        specs.sort_by(|a, b| base.dim(a.sort).cmp(&base.dim(b.sort)).then_with(|| a.id.cmp(&b.id)));
        let mut sig = Signature::empty(base.clone());
        let mut start = 0;
        while start < specs.len() {
            let d = base.dim(specs[start].sort);
            let end = start + specs[start..].iter().take_while(|s| base.dim(s.sort) == d).count();
            let checked = specs[start..end]
                .iter()
                .map(|s| sig.check_symbol(s))
                .collect::<Result<Vec<_>>>()?;
            for f in checked {
                sig.insert(f)?;
            }
            start = end;
        }
        Ok(sig)
    }

    fn insert(&mut self, f: FunctionSymbol) -> Result<()> {
        if self.index.contains_key(&f.id) {
            return Err(Error::DuplicateId(f.id.to_string()));
        }
        let pos = self.symbols.partition_point(|s| s.id < f.id);
        self.symbols.insert(pos, f);
        self.reindex();
        Ok(())
    }

    fn reindex(&mut self) {
        self.index = self.symbols.iter().enumerate().map(|(k, s)| (s.id.clone(), k)).collect();
        self.by_sort = vec![Vec::new(); self.base.sort_count()];
        for (k, s) in self.symbols.iter().enumerate() {
            self.by_sort[s.sort].push(k);
        }
    }

    /// Checks a symbol against the symbols of this signature of dimension
    /// strictly below its output sort.
    pub fn check_symbol(&self, spec: &SymbolSpec) -> Result<FunctionSymbol> {
        let base = &self.base;
        let i = spec.sort;
        let d = base.dim(i);
        if !same_base(spec.arity.base(), base) {
            return Err(Error::BaseMismatch);
        }
        if spec.arity.dimension().is_some_and(|ad| ad > d) {
            return Err(Error::ArityDimensionViolation(spec.id.to_string()));
        }
        let lower = self.restrict_below(d);
        let ctx = FreeContext { signature: &lower, arity: &spec.arity };
        let into = base.faces_into(i);
        let mut given: Vec<Option<Term>> = vec![None; into.len()];
        for (face, t) in &spec.boundary {
            let fi = base.face(*face);
            if fi.dst != i {
                return Err(Error::BoundaryIllTyped(format!(
                    "`{}`: face `{}` does not end at sort `{}`",
                    spec.id,
                    fi.id,
                    base.sort(i).id
                )));
            }
            let s = check_term(&ctx, t).map_err(|e| match e {
                Error::UnknownSymbol(_) | Error::BoundaryIllTyped(_) => e,
                other => Error::BoundaryIllTyped(format!("`{}` at face `{}`: {other}", spec.id, fi.id)),
            })?;
            if s != fi.src {
                return Err(Error::BoundaryIllTyped(format!(
                    "`{}` at face `{}`: term {t} has sort `{}`, expected `{}`",
                    spec.id,
                    fi.id,
                    base.sort(s).id,
                    base.sort(fi.src).id
                )));
            }
            let slot = &mut given[base.face_position(*face)];
            if slot.is_some() {
                return Err(Error::DuplicateId(format!("{} boundary at {}", spec.id, fi.id)));
            }
            *slot = Some(t.clone());
        }
        let fam = match complete_family(base, i, given, &mut |g, t| crate::term::boundary(&ctx, g, t))? {
            Ok(fam) => fam,
            Err(p) => {
                return Err(Error::BoundaryIllTyped(format!(
                    "`{}`: no boundary term for face `{}`",
                    spec.id,
                    base.face(into[p]).id
                )))
            }
        };
        if let Some((dl, dr)) = check_cocycle(base, i, &fam, &mut |g, t| crate::term::boundary(&ctx, g, t))? {
            let comp = base.compose_faces(dr, dl).expect("composable");
            return Err(Error::CocycleFailure(format!(
                "`{}`: {}*(t[{}]) differs from t[{}] (the reading ({})*(t[{}]) is ill-typed unless the faces coincide)",
                spec.id,
                base.face(dr).id,
                base.face(dl).id,
                base.face(comp).id,
                base.face(dr).id,
                base.face(dr).id
            )));
        }
        for t in &fam {
            let _ = sort_of(&ctx, t)?;
        }
        let boundary_ix = fam
            .iter()
            .map(|t| t.map_vars(&mut |v: &Name| spec.arity.cell_index(v).map(|(s, k)| spec.arity.flat(s, k)).expect("checked")))
            .collect();
        Ok(FunctionSymbol { id: spec.id.clone(), sort: i, arity: spec.arity.clone(), boundary: fam, boundary_ix })
    }

    /// Adds one symbol, validated against the lower-dimensional part.
    pub fn append_symbol(&self, spec: SymbolSpec) -> Result<Signature> {
        let f = self.check_symbol(&spec)?;
        let mut sig = self.clone();
        sig.insert(f)?;
        Ok(sig)
    }

    pub fn base(&self) -> &Arc<DirectCategory> {
        &self.base
    }

    pub fn symbols(&self) -> &[FunctionSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: &str) -> Result<&FunctionSymbol> {
        self.index.get(id).map(|&k| &self.symbols[k]).ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    /// Position of a symbol in [`Signature::symbols`].
    pub fn symbol_index(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownSymbol(id.to_string()))
    }

    pub fn symbols_of_sort(&self, sort: usize) -> impl Iterator<Item = &FunctionSymbol> + '_ {
        self.by_sort[sort].iter().map(move |&k| &self.symbols[k])
    }

    /// Drops all symbols whose output sort has dimension above `n`. The base
    /// category is kept.
    pub fn restrict(&self, n: usize) -> Signature {
        let mut sig = self.clone();
        sig.symbols.retain(|s| self.base.dim(s.sort) <= n);
        sig.reindex();
        sig
    }

    fn restrict_below(&self, d: usize) -> Signature {
        match d.checked_sub(1) {
            Some(n) => self.restrict(n),
            None => Signature::empty(self.base.clone()),
        }
    }

    pub fn to_raw(&self) -> RawSignature {
        RawSignature {
            category: self.base.to_raw(),
            symbols: self
                .symbols
                .iter()
                .map(|f| RawSymbol {
                    id: f.id.to_string(),
                    sort: self.base.sort(f.sort).id.to_string(),
                    arity: f.arity.to_raw(false),
                    boundary: self
                        .base
                        .faces_into(f.sort)
                        .iter()
                        .zip(&f.boundary)
                        .map(|(&g, t)| RawBoundary { face: self.base.face(g).id.to_string(), term: t.to_raw(self) })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses a raw symbol into a spec. Boundary terms can only be parsed once
/// the lower symbols are known, so parsing and validation are interleaved.
fn parse_symbol(raw: &RawSymbol, sig: &Signature) -> Result<SymbolSpec> {
    let base = sig.base().clone();
    let sort = base.sort_index(&raw.sort)?;
    let arity = Arc::new(validate_presheaf_on(&raw.arity, base.clone())?);
    let boundary = raw
        .boundary
        .iter()
        .map(|b| Ok((base.face_index(&b.face)?, Term::from_raw(&b.term, sig)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolSpec { id: name(&raw.id), sort, arity, boundary })
}

pub fn validate_signature(raw: &RawSignature) -> Result<Signature> {
    let base = Arc::new(crate::category::validate_category(&raw.category)?);
    validate_signature_on(raw, base)
}

/// Validates symbols against an already validated base category.
pub fn validate_signature_on(raw: &RawSignature, base: Arc<DirectCategory>) -> Result<Signature> {
    let mut order: Vec<&RawSymbol> = raw.symbols.iter().collect();
    let dims = order
        .iter()
        .map(|s| base.sort_index(&s.sort).map(|i| base.dim(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut keyed: Vec<(usize, &RawSymbol)> = dims.into_iter().zip(order.drain(..)).collect();
    keyed.sort_by_key(|(d, _)| *d);
    let mut sig = Signature::empty(base.clone());
    let mut start = 0;
    while start < keyed.len() {
        let d = keyed[start].0;
        let end = start + keyed[start..].iter().take_while(|(e, _)| *e == d).count();
        let lower = sig.clone();
        for (_, raw) in &keyed[start..end] {
            let spec = parse_symbol(raw, &lower)?;
            let f = lower.check_symbol(&spec)?;
            sig.insert(f)?;
        }
        start = end;
    }
    Ok(sig)
}
