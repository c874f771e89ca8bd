//! Polyplexes: terms of the terminal computad, kept as finite trees since
//! dimension drops along every boundary. Includes classification of terms,
//! representing computads and the nerve.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{name, Name};
use crate::computad::{colimit_var, morphism_matching, Computad, ComputadMorphism, Diagram, GenSpec};
use crate::enumerate::level_table;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::presheaf::{boundary_representable, enumerate_maps, Presheaf};
use crate::signature::Signature;
use crate::term::{boundary, Context, FiniteContext, Term};

/// A generator of the terminal computad: a sort and a compatible boundary
/// family indexed like `faces_into(sort)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Plex {
    pub sort: usize,
    pub faces: Vec<Polyplex>,
}

pub type PlexRef = Arc<Plex>;
pub type Polyplex = Term<PlexRef>;

impl fmt::Display for Plex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.faces.is_empty() {
            return write!(f, "*{}", self.sort);
        }
        write!(f, "*{}<", self.sort)?;
        for (k, p) in self.faces.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for Plex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn is_plex(p: &Polyplex) -> bool {
    matches!(p, Term::Var(_))
}

/// The terminal computad over a signature. Only used as a term context.
pub struct Terminal<'a>(pub &'a Signature);

impl Context for Terminal<'_> {
    type Gen = PlexRef;

    fn signature(&self) -> &Signature {
        self.0
    }

    fn gen_sort(&self, g: &PlexRef) -> Result<usize> {
        Ok(g.sort)
    }

    fn gluing(&self, g: &PlexRef, face: usize) -> Result<Polyplex> {
        let base = self.0.base();
        if base.face(face).dst != g.sort {
            return Err(Error::SortMismatch(format!("face `{}` applied to a plex of another sort", base.face(face).id)));
        }
        Ok(g.faces[base.face_position(face)].clone())
    }
}

/// Plexes of every generator of `c`, indexed `[sort][generator]`.
pub fn classify_generators(c: &Computad) -> Vec<Vec<PlexRef>> {
    let base = c.base();
    let mut out: Vec<Vec<Option<PlexRef>>> = (0..base.sort_count()).map(|s| vec![None; c.gen_count(s)]).collect();
    for &s in base.sorts_by_dim() {
        for k in 0..c.gen_count(s) {
            let faces = c.gluing_family(s, k).iter().map(|t| classify_with(c, &out, t)).collect();
            out[s][k] = Some(Arc::new(Plex { sort: s, faces }));
        }
    }
    out.into_iter().map(|v| v.into_iter().map(|p| p.expect("filled")).collect()).collect()
}

fn classify_with(c: &Computad, table: &[Vec<Option<PlexRef>>], t: &Term) -> Polyplex {
    t.map_vars(&mut |g: &Name| {
        let (s, k) = c.gen_index(g).expect("term over the computad");
        table[s][k].clone().expect("lower generators classified first")
    })
}

/// `Term(!)`: the shape of a term.
pub fn classify(c: &Computad, t: &Term) -> Result<Polyplex> {
    let plexes = classify_generators(c);
    classify_in(c, &plexes, t)
}

/// Like [`classify`] with precomputed generator plexes.
pub fn classify_in(c: &Computad, plexes: &[Vec<PlexRef>], t: &Term) -> Result<Polyplex> {
    t.bind(&mut |g: &Name| {
        let (s, k) = c.gen_index(g)?;
        Ok(Term::Var(plexes[s][k].clone()))
    })
}

/// Representing computads, memoised by polyplex.
pub struct Representer {
    sig: Arc<Signature>,
    memo: HashMap<Polyplex, (Arc<Computad>, Term)>,
}

/// A name not among the generators of `c`.
fn fresh(c: &Computad, stem: &str) -> Name {
    let mut k = 0;
    loop {
        let n = if k == 0 { stem.to_string() } else { format!("{stem}{k}") };
        if c.gen_index(&n).is_err() {
            return name(&n);
        }
        k += 1;
    }
}

impl Representer {
    pub fn new(sig: Arc<Signature>) -> Representer {
        Representer { sig, memo: HashMap::new() }
    }

    /// `|p|` with its universal term `t_p`: every term of a computad `C`
    /// classified as `p` is the image of `t_p` under exactly one
    /// variable-to-variable morphism `|p| -> C`.
    pub fn represent(&mut self, p: &Polyplex) -> Result<(Arc<Computad>, Term)> {
        if let Some(r) = self.memo.get(p) {
            return Ok(r.clone());
        }
        let r = match p {
            Term::Var(plex) => self.represent_plex(plex)?,
            Term::App(f, args) => self.represent_app(f, args)?,
        };
        self.memo.insert(p.clone(), r.clone());
        Ok(r)
    }

    fn represent_plex(&mut self, plex: &PlexRef) -> Result<(Arc<Computad>, Term)> {
        let base = self.sig.base().clone();
        let into = base.faces_into(plex.sort).to_vec();
        let mut parts = Vec::new();
        for p in &plex.faces {
            parts.push(self.represent(p)?);
        }
        let (apex, glue): (Arc<Computad>, Vec<Term>) = if into.is_empty() {
            (Arc::new(Computad::empty(self.sig.clone())), Vec::new())
        } else {
            let mut d = Diagram::default();
            for (pos, &face) in into.iter().enumerate() {
                d.node(base.face(face).id.to_string(), parts[pos].0.clone());
            }
            for (pd, &delta) in into.iter().enumerate() {
                let j = base.face(delta).src;
                for &dp in base.faces_into(j) {
                    let eps = base.compose_faces(dp, delta).expect("composable");
                    let pe = base.face_position(eps);
                    let (ce, te) = &parts[pe];
                    let (cd, td) = &parts[pd];
                    let target = boundary(&**cd, dp, td)?;
                    let m = morphism_matching(ce, te, cd, &target).ok_or_else(|| {
                        Error::NotCompatible(format!("boundary family of {plex} is not a cocycle"))
                    })?;
                    d.edge(pe, pd, m);
                }
            }
            let col = colimit_var(&d)?;
            let glue = parts
                .iter()
                .zip(&col.legs)
                .map(|((_, t), leg)| leg.apply(t))
                .collect::<Result<Vec<_>>>()?;
            (col.apex, glue)
        };
        let star = fresh(&apex, "*");
        let mut specs = apex.specs();
        specs.push(GenSpec { name: star.clone(), sort: plex.sort, gluing: into.into_iter().zip(glue).collect() });
        Ok((Arc::new(Computad::new(self.sig.clone(), specs)?), Term::Var(star)))
    }

    fn represent_app(&mut self, f: &Name, args: &[Polyplex]) -> Result<(Arc<Computad>, Term)> {
        let sym = self.sig.symbol(f)?.clone();
        let arity = sym.arity().clone();
        let base = self.sig.base().clone();
        let mut parts = Vec::new();
        for p in args {
            parts.push(self.represent(p)?);
        }
        if parts.is_empty() {
            let c = Arc::new(Computad::empty(self.sig.clone()));
            return Ok((c, Term::App(f.clone(), Vec::new().into())));
        }
        let mut d = Diagram::default();
        for n in 0..arity.total() {
            let (s, k) = arity.unflat(n);
            d.node(arity.cell_name(s, k).to_string(), parts[n].0.clone());
        }
        for n in 0..arity.total() {
            let (s, k) = arity.unflat(n);
            for &dp in base.faces_into(s) {
                let low = arity.flat(base.face(dp).src, arity.act(dp, k));
                let (cl, tl) = &parts[low];
                let (cn, tn) = &parts[n];
                let target = boundary(&**cn, dp, tn)?;
                let m = morphism_matching(cl, tl, cn, &target)
                    .ok_or_else(|| Error::IncompatibleArgs(format!("arguments of `{f}` are not compatible")))?;
                d.edge(low, n, m);
            }
        }
        let col = colimit_var(&d)?;
        let args = parts.iter().zip(&col.legs).map(|((_, t), leg)| leg.apply(t)).collect::<Result<Vec<_>>>()?;
        Ok((col.apex, Term::App(f.clone(), args.into())))
    }
}

/// Compatible boundary families for a sort, as natural maps out of `∂D^i`.
pub(crate) struct BoundaryShape {
    pub(crate) presheaf: Presheaf,
    /// flat index in `presheaf` for each position in `faces_into(sort)`
    pub(crate) flat_of_face: Vec<usize>,
}

pub(crate) fn boundary_shape(sig: &Signature, sort: usize) -> Result<BoundaryShape> {
    let base = sig.base();
    let (presheaf, _) = boundary_representable(base, &base.sort(sort).id)?;
    let flat_of_face = base
        .faces_into(sort)
        .iter()
        .map(|&f| {
            let (s, k) = presheaf.cell_index(&base.face(f).id)?;
            Ok(presheaf.flat(s, k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryShape { presheaf, flat_of_face })
}

/// A context whose generators at each sort are a given list of plexes.
struct PlexPool<'a> {
    sig: &'a Signature,
    plexes: &'a [Vec<PlexRef>],
}

impl Context for PlexPool<'_> {
    type Gen = PlexRef;
    fn signature(&self) -> &Signature {
        self.sig
    }
    fn gen_sort(&self, g: &PlexRef) -> Result<usize> {
        Ok(g.sort)
    }
    fn gluing(&self, g: &PlexRef, face: usize) -> Result<Polyplex> {
        Terminal(self.sig).gluing(g, face)
    }
}

impl FiniteContext for PlexPool<'_> {
    fn generators(&self, sort: usize) -> Vec<PlexRef> {
        self.plexes[sort].clone()
    }
}

/// Polyplexes by level: level `k` holds the plexes whose boundary families
/// lie in level `k` and the applications to families in level `k - 1`.
pub fn polyplex_levels(sig: &Signature, depth: usize) -> Result<Vec<Vec<Vec<Polyplex>>>> {
    let base = sig.base().clone();
    let n = base.sort_count();
    let shapes = (0..n).map(|s| boundary_shape(sig, s)).collect::<Result<Vec<_>>>()?;
    let none = vec![Vec::new(); n];
    let pool = PlexPool { sig, plexes: &none };
    let mut levels: Vec<Vec<Vec<Polyplex>>> = Vec::new();
    for _ in 0..=depth {
        let prev_table = match levels.last() {
            Some(prev) => Some(level_table(&pool, prev)?),
            None => None,
        };
        let mut cur: Vec<Vec<Polyplex>> = vec![Vec::new(); n];
        for d in base.dims() {
            let table = level_table(&pool, &cur)?;
            let sorts: Vec<usize> = base.sorts_by_dim().iter().copied().filter(|&s| base.dim(s) == d).collect();
            for s in sorts {
                let mut out = Vec::new();
                let shape = &shapes[s];
                for fam in enumerate_maps(&shape.presheaf, &table, Exec::default()) {
                    let faces = shape
                        .flat_of_face
                        .iter()
                        .map(|&fl| cur[shape.presheaf.unflat(fl).0][fam[fl]].clone())
                        .collect();
                    out.push(Term::Var(Arc::new(Plex { sort: s, faces })));
                }
                if let (Some(prev), Some(table)) = (levels.last(), prev_table.as_ref()) {
                    for f in sig.symbols_of_sort(s) {
                        let a = f.arity();
                        for vals in enumerate_maps(a, table, Exec::default()) {
                            let args: Vec<Polyplex> =
                                vals.iter().enumerate().map(|(m, &v)| prev[a.unflat(m).0][v].clone()).collect();
                            out.push(Term::App(f.id.clone(), args.into()));
                        }
                    }
                }
                out.sort();
                out.dedup();
                cur[s] = out;
            }
        }
        levels.push(cur);
    }
    Ok(levels)
}

/// Polyplexes of a sort up to the depth bound, ordered by depth then
/// structurally.
pub fn enumerate_polyplexes(sig: &Signature, sort: usize, depth: usize) -> Result<Vec<Polyplex>> {
    let mut out = polyplex_levels(sig, depth)?.pop().expect("level").swap_remove(sort);
    out.sort_by_cached_key(|p| p.depth());
    Ok(out)
}

/// Generators of a computad grouped by plex, with each generator's
/// variable-to-variable map out of the representing computad of its plex.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub fibres: BTreeMap<PlexRef, Vec<Name>>,
    pub elements: BTreeMap<Name, (PlexRef, ComputadMorphism)>,
}

pub fn nerve(c: &Arc<Computad>) -> Result<Nerve> {
    let plexes = classify_generators(c);
    let mut rep = Representer::new(c.signature_arc().clone());
    let mut fibres: BTreeMap<PlexRef, Vec<Name>> = BTreeMap::new();
    let mut elements = BTreeMap::new();
    for s in 0..plexes.len() {
        for (k, p) in plexes[s].iter().enumerate() {
            let g = c.gen_name(s, k).clone();
            fibres.entry(p.clone()).or_default().push(g.clone());
            let (rp, tp) = rep.represent(&Term::Var(p.clone()))?;
            let rho = morphism_matching(&rp, &tp, c, &Term::Var(g.clone()))
                .ok_or_else(|| Error::NotCompatible(format!("`{g}` does not match its plex")))?;
            elements.insert(g, (p.clone(), rho));
        }
    }
    for v in fibres.values_mut() {
        v.sort();
    }
    Ok(Nerve { fibres, elements })
}

/// Rebuilds a computad from nerve data: each element glued along the image
/// of the boundary of the top generator of its representing computad.
pub fn reconstruct(nerve: &Nerve, sig: &Arc<Signature>) -> Result<Computad> {
    let mut rep = Representer::new(sig.clone());
    let mut specs = Vec::new();
    for (g, (p, rho)) in &nerve.elements {
        let (rp, tp) = rep.represent(&Term::Var(p.clone()))?;
        let star = tp.as_var().expect("plexes are represented by a generator").clone();
        let (s, k) = rp.gen_index(&star)?;
        let gluing = rp
            .base()
            .faces_into(s)
            .iter()
            .zip(rp.gluing_family(s, k))
            .map(|(&f, t)| Ok((f, rho.apply(t)?)))
            .collect::<Result<Vec<_>>>()?;
        specs.push(GenSpec { name: g.clone(), sort: p.sort, gluing });
    }
    Computad::new(sig.clone(), specs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawPolyplex {
    Plex(RawPlex),
    App(RawPolyApp),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPlex {
    pub sort: String,
    #[serde(default)]
    pub boundary: Vec<RawPlexFace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPlexFace {
    pub face: String,
    pub polyplex: RawPolyplex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPolyApp {
    pub symbol: String,
    #[serde(default)]
    pub args: Vec<RawPolyArg>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPolyArg {
    pub cell: String,
    pub polyplex: RawPolyplex,
}

pub fn polyplex_to_raw(p: &Polyplex, sig: &Signature) -> RawPolyplex {
    let base = sig.base();
    match p {
        Term::Var(plex) => RawPolyplex::Plex(RawPlex {
            sort: base.sort(plex.sort).id.to_string(),
            boundary: base
                .faces_into(plex.sort)
                .iter()
                .zip(&plex.faces)
                .map(|(&f, q)| RawPlexFace { face: base.face(f).id.to_string(), polyplex: polyplex_to_raw(q, sig) })
                .collect(),
        }),
        Term::App(f, args) => {
            let a = sig.symbol(f).expect("symbol").arity();
            RawPolyplex::App(RawPolyApp {
                symbol: f.to_string(),
                args: args
                    .iter()
                    .enumerate()
                    .map(|(n, q)| {
                        let (s, k) = a.unflat(n);
                        RawPolyArg { cell: a.cell_name(s, k).to_string(), polyplex: polyplex_to_raw(q, sig) }
                    })
                    .collect(),
            })
        }
    }
}
