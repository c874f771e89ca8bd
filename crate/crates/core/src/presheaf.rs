//! Finite presheaves on a direct category and their morphisms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{identity_name, name, validate_category, Arrow, DirectCategory, Name, RawCategory};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawAction {
    pub face: String,
    pub from: String,
    pub to: String,
}

/// JSON `presheaf` document. The category may be omitted when the presheaf is
/// nested inside a document that already fixes it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPresheaf {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<RawCategory>,
    pub cells: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub action: Vec<RawAction>,
}

#[derive(Clone)]
pub struct Presheaf {
    base: Arc<DirectCategory>,
    cells: Vec<Vec<Name>>,
    // per face `j -> i`: index in X_i to index in X_j
    action: Vec<Vec<usize>>,
    index: HashMap<Name, (usize, usize)>,
    offsets: Vec<usize>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.cells == other.cells && self.action == other.action
    }
}

impl Eq for Presheaf {}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (s, cells) in self.cells.iter().enumerate() {
            m.entry(&self.base.sort(s).id, cells);
        }
        m.finish()
    }
}

pub(crate) fn same_base(a: &Arc<DirectCategory>, b: &Arc<DirectCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn validate_presheaf(raw: &RawPresheaf) -> Result<Presheaf> {
    let cat = raw
        .category
        .as_ref()
        .ok_or_else(|| Error::Malformed("presheaf without a category".into()))?;
    validate_presheaf_on(raw, Arc::new(validate_category(cat)?))
}

/// Validates `raw` over an already validated base. A category embedded in
/// `raw` must agree with `base`.
pub fn validate_presheaf_on(raw: &RawPresheaf, base: Arc<DirectCategory>) -> Result<Presheaf> {
    if let Some(cat) = &raw.category {
        if validate_category(cat)? != *base {
            return Err(Error::BaseMismatch);
        }
    }
    let mut cells = vec![Vec::new(); base.sort_count()];
    for (sort, list) in &raw.cells {
        let s = base.sort_index(sort)?;
        cells[s] = list.iter().map(|c| name(c)).collect();
    }
    let mut table: HashMap<(usize, Name), Name> = HashMap::new();
    for a in &raw.action {
        let f = base.face_index(&a.face)?;
        if let Some(prev) = table.insert((f, name(&a.from)), name(&a.to)) {
            if *prev != *a.to {
                return Err(Error::FunctorialityFailure(format!(
                    "`{}` has two values under `{}`",
                    a.from, a.face
                )));
            }
        }
    }
    Presheaf::from_fn(base, cells, |f, cell| table.get(&(f, cell.clone())).cloned())
}

impl Presheaf {
    /// Builds and validates a presheaf from cell lists and a partial action
    /// `(face, cell of dst) -> cell of src`.
    pub fn from_fn(
        base: Arc<DirectCategory>,
        mut cells: Vec<Vec<Name>>,
        action: impl Fn(usize, &Name) -> Option<Name>,
    ) -> Result<Presheaf> {
        if cells.len() != base.sort_count() {
            return Err(Error::Malformed("cell lists do not match the sorts".into()));
        }
        let mut index = HashMap::new();
        for (s, list) in cells.iter_mut().enumerate() {
            list.sort();
            for (k, c) in list.iter().enumerate() {
                if index.insert(c.clone(), (s, k)).is_some() {
                    return Err(Error::DuplicateId(c.to_string()));
                }
            }
        }
        let mut table = Vec::with_capacity(base.faces().len());
        for (f, face) in base.faces().iter().enumerate() {
            let mut col = Vec::with_capacity(cells[face.dst].len());
            for c in &cells[face.dst] {
                let image = action(f, c).ok_or_else(|| {
                    Error::MissingAction(format!("`{}` on cell `{}`", face.id, c))
                })?;
                match index.get(&image) {
                    Some(&(s, k)) if s == face.src => col.push(k),
                    Some(_) => {
                        return Err(Error::SortMismatch(format!(
                            "`{}` sends `{}` to `{}` outside sort `{}`",
                            face.id,
                            c,
                            image,
                            base.sort(face.src).id
                        )))
                    }
                    None => return Err(Error::UnknownGenerator(image.to_string())),
                }
            }
            table.push(col);
        }
        let x = Presheaf::assemble(base, cells, table, index);
        x.check_functorial()?;
        Ok(x)
    }

    fn assemble(
        base: Arc<DirectCategory>,
        cells: Vec<Vec<Name>>,
        action: Vec<Vec<usize>>,
        index: HashMap<Name, (usize, usize)>,
    ) -> Presheaf {
        let mut offsets = Vec::with_capacity(cells.len() + 1);
        let mut acc = 0;
        for c in &cells {
            offsets.push(acc);
            acc += c.len();
        }
        offsets.push(acc);
        Presheaf { base, cells, action, index, offsets }
    }

    fn check_functorial(&self) -> Result<()> {
        let base = &self.base;
        for (g, gf) in base.faces().iter().enumerate() {
            for (f, ff) in base.faces().iter().enumerate() {
                if ff.src != gf.dst {
                    continue;
                }
                let gf_comp = base.compose_faces(g, f).expect("validated table");
                for x in 0..self.cells[ff.dst].len() {
                    let two_step = self.action[g][self.action[f][x]];
                    if two_step != self.action[gf_comp][x] {
                        return Err(Error::FunctorialityFailure(format!(
                            "`{}` then `{}` on `{}`",
                            ff.id, gf.id, self.cells[ff.dst][x]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<DirectCategory> {
        &self.base
    }

    pub fn cells(&self, sort: usize) -> &[Name] {
        &self.cells[sort]
    }

    pub fn cell_count(&self, sort: usize) -> usize {
        self.cells[sort].len()
    }

    pub fn total(&self) -> usize {
        self.offsets[self.cells.len()]
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    pub fn cell_name(&self, sort: usize, k: usize) -> &Name {
        &self.cells[sort][k]
    }

    pub fn cell_index(&self, cell: &str) -> Result<(usize, usize)> {
        self.index.get(cell).copied().ok_or_else(|| Error::UnknownGenerator(cell.into()))
    }

    /// Position of a cell in the flat order (sorts in id order, cells sorted).
    pub fn flat(&self, sort: usize, k: usize) -> usize {
        self.offsets[sort] + k
    }

    pub fn unflat(&self, n: usize) -> (usize, usize) {
        let s = self.offsets.partition_point(|&o| o <= n) - 1;
        (s, n - self.offsets[s])
    }

    /// `f*` applied to cell `k` of the target sort of `f`.
    pub fn act(&self, f: usize, k: usize) -> usize {
        self.action[f][k]
    }

    pub fn act_arrow(&self, a: Arrow, k: usize) -> usize {
        match a {
            Arrow::Id(_) => k,
            Arrow::Face(f) => self.action[f][k],
        }
    }

    /// Largest dimension carrying a cell.
    pub fn dimension(&self) -> Option<usize> {
        (0..self.cells.len()).filter(|&s| !self.cells[s].is_empty()).map(|s| self.base.dim(s)).max()
    }

    pub fn to_raw(&self, with_category: bool) -> RawPresheaf {
        let mut cells = BTreeMap::new();
        for (s, list) in self.cells.iter().enumerate() {
            cells.insert(self.base.sort(s).id.to_string(), list.iter().map(|c| c.to_string()).collect());
        }
        let mut action = Vec::new();
        for (f, face) in self.base.faces().iter().enumerate() {
            for (x, &y) in self.action[f].iter().enumerate() {
                action.push(RawAction {
                    face: face.id.to_string(),
                    from: self.cells[face.dst][x].to_string(),
                    to: self.cells[face.src][y].to_string(),
                });
            }
        }
        RawPresheaf { category: with_category.then(|| self.base.to_raw()), cells, action }
    }

    pub fn empty(base: Arc<DirectCategory>) -> Presheaf {
        let n = base.sort_count();
        Presheaf::from_fn(base, vec![Vec::new(); n], |_, _| None).expect("empty presheaf")
    }

    /// Sub-presheaf on the given cells, which must be closed under faces.
    pub fn sub(&self, keep: impl Fn(usize, &Name) -> bool) -> Result<(Presheaf, PresheafMorphism)> {
        let cells: Vec<Vec<Name>> = self
            .cells
            .iter()
            .enumerate()
            .map(|(s, l)| l.iter().filter(|c| keep(s, c)).cloned().collect())
            .collect();
        for (s, list) in cells.iter().enumerate() {
            for c in list {
                let (_, k) = self.index[c];
                for &f in self.base.faces_into(s) {
                    let src = self.base.face(f).src;
                    let img = &self.cells[src][self.action[f][k]];
                    if !keep(src, img) {
                        return Err(Error::BadSubset(format!("face of `{c}` at `{}` is `{img}`", self.base.face(f).id)));
                    }
                }
            }
        }
        let sub = Presheaf::from_fn(self.base.clone(), cells, |f, c| {
            let (_, k) = self.index[c];
            Some(self.cells[self.base.face(f).src][self.action[f][k]].clone())
        })?;
        let comps = (0..sub.cells.len())
            .map(|s| sub.cells[s].iter().map(|c| self.index[c].1).collect())
            .collect();
        let inc = PresheafMorphism { src: Arc::new(sub.clone()), dst: Arc::new(self.clone()), comps };
        Ok((sub, inc))
    }

    /// Restriction to the sorts of dimension at most `n`, over the truncated base.
    pub fn truncate(&self, n: usize) -> Presheaf {
        let base = Arc::new(self.base.truncate(n));
        let cells = base
            .sorts()
            .iter()
            .map(|s| self.cells[self.base.sort_index(&s.id).expect("sort")].clone())
            .collect();
        let faces: Vec<usize> =
            base.faces().iter().map(|f| self.base.face_index(&f.id).expect("face")).collect();
        Presheaf::from_fn(base, cells, |f, c| {
            let g = faces[f];
            let (_, k) = self.index[c];
            Some(self.cells[self.base.face(g).src][self.action[g][k]].clone())
        })
        .expect("truncation of a presheaf is a presheaf")
    }

    /// Same base, cells above dimension `n` removed.
    pub fn sk_tr(&self, n: usize) -> Presheaf {
        self.sub(|s, _| self.base.dim(s) <= n).expect("lower cells are closed under faces").0
    }
}

/// Re-extends a presheaf on a truncation of `base` by empty sets above.
pub fn skeleton_presheaf(y: &Presheaf, base: Arc<DirectCategory>) -> Result<Presheaf> {
    let n = y.base.max_dim().unwrap_or(0);
    if base.truncate(n) != *y.base {
        return Err(Error::BaseMismatch);
    }
    let cells = base
        .sorts()
        .iter()
        .map(|s| match y.base.sort_index(&s.id) {
            Ok(t) => y.cells[t].clone(),
            Err(_) => Vec::new(),
        })
        .collect();
    Presheaf::from_fn(base.clone(), cells, |f, c| {
        let yf = y.base.face_index(&base.face(f).id).ok()?;
        let (_, k) = y.index[c];
        Some(y.cells[y.base.face(yf).src][y.action[yf][k]].clone())
    })
}

/// The representable presheaf `hom(-, i)`; cells are named by arrow ids.
pub fn representable(base: &Arc<DirectCategory>, sort: &str) -> Result<Presheaf> {
    let i = base.sort_index(sort)?;
    let mut cells = vec![Vec::new(); base.sort_count()];
    cells[i].push(name(&identity_name(&base.sort(i).id)));
    for &f in base.faces_into(i) {
        cells[base.face(f).src].push(base.face(f).id.clone());
    }
    let arrow_of = |c: &Name| -> Arrow {
        base.face_index(c).map(Arrow::Face).unwrap_or(Arrow::Id(i))
    };
    Presheaf::from_fn(base.clone(), cells, |g, c| {
        let a = base.compose(Arrow::Face(g), arrow_of(c)).ok()?;
        Some(name(&base.arrow_name(a)))
    })
}

/// The boundary `∂D^i` with its inclusion into `D^i`.
pub fn boundary_representable(base: &Arc<DirectCategory>, sort: &str) -> Result<(Presheaf, PresheafMorphism)> {
    let i = base.sort_index(sort)?;
    representable(base, sort)?.sub(|s, _| s != i)
}

/// A natural transformation, stored as per-sort index maps.
#[derive(Clone, PartialEq, Eq)]
pub struct PresheafMorphism {
    pub src: Arc<Presheaf>,
    pub dst: Arc<Presheaf>,
    pub comps: Vec<Vec<usize>>,
}

impl fmt::Debug for PresheafMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for s in 0..self.comps.len() {
            for (k, &v) in self.comps[s].iter().enumerate() {
                m.entry(self.src.cell_name(s, k), self.dst.cell_name(s, v));
            }
        }
        m.finish()
    }
}

impl PresheafMorphism {
    pub fn new(src: Arc<Presheaf>, dst: Arc<Presheaf>, comps: Vec<Vec<usize>>) -> Result<Self> {
        if !same_base(&src.base, &dst.base) {
            return Err(Error::BaseMismatch);
        }
        let m = PresheafMorphism { src, dst, comps };
        m.check()?;
        Ok(m)
    }

    /// From a cell-name assignment.
    pub fn from_names(src: Arc<Presheaf>, dst: Arc<Presheaf>, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut comps: Vec<Vec<usize>> = (0..src.cells.len()).map(|s| vec![usize::MAX; src.cells[s].len()]).collect();
        for (a, b) in map {
            let (s, k) = src.cell_index(a)?;
            let (t, v) = dst.cell_index(b)?;
            if s != t {
                return Err(Error::SortMismatch(format!("`{a}` and `{b}`")));
            }
            comps[s][k] = v;
        }
        for (s, row) in comps.iter().enumerate() {
            if let Some(k) = row.iter().position(|&v| v == usize::MAX) {
                return Err(Error::PartialTable(format!("no value for `{}`", src.cells[s][k])));
            }
        }
        PresheafMorphism::new(src, dst, comps)
    }

    fn check(&self) -> Result<()> {
        let base = &self.src.base;
        for s in 0..base.sort_count() {
            if self.comps[s].len() != self.src.cells[s].len() || self.comps[s].iter().any(|&v| v >= self.dst.cells[s].len()) {
                return Err(Error::Malformed("component has the wrong shape".into()));
            }
        }
        for (f, face) in base.faces().iter().enumerate() {
            for x in 0..self.src.cells[face.dst].len() {
                if self.comps[face.src][self.src.action[f][x]] != self.dst.action[f][self.comps[face.dst][x]] {
                    return Err(Error::FunctorialityFailure(format!(
                        "naturality fails at `{}` on `{}`",
                        face.id, self.src.cells[face.dst][x]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: Arc<Presheaf>) -> Self {
        let comps = x.cells.iter().map(|l| (0..l.len()).collect()).collect();
        PresheafMorphism { src: x.clone(), dst: x, comps }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PresheafMorphism) -> Result<Self> {
        if *self.dst != *next.src {
            return Err(Error::EndpointMismatch);
        }
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(s, row)| row.iter().map(|&v| next.comps[s][v]).collect())
            .collect();
        Ok(PresheafMorphism { src: self.src.clone(), dst: next.dst.clone(), comps })
    }

    pub fn apply(&self, sort: usize, k: usize) -> usize {
        self.comps[sort][k]
    }

    pub fn to_names(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (s, row) in self.comps.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                out.insert(self.src.cells[s][k].to_string(), self.dst.cells[s][v].to_string());
            }
        }
        out
    }

    /// Flat value vector in the source's flat cell order.
    pub fn flat_values(&self) -> Vec<usize> {
        self.comps.iter().flatten().copied().collect()
    }
}

/// Target of a hom enumeration: indexed cells per sort with a partial action.
/// A `None` entry means the face leaves the candidate set, so the cell can
/// never be the image of a cell whose face is also mapped.
#[derive(Clone, Debug)]
pub struct CellTable {
    pub counts: Vec<usize>,
    pub action: Vec<Vec<Option<usize>>>,
}

impl CellTable {
    pub fn from_presheaf(x: &Presheaf) -> CellTable {
        CellTable {
            counts: x.cells.iter().map(Vec::len).collect(),
            action: x.action.iter().map(|col| col.iter().map(|&v| Some(v)).collect()).collect(),
        }
    }
}

struct Plan {
    order: Vec<(usize, usize)>,
    // for each position in `order`: (position of a higher cell, face)
    forcers: Vec<Vec<(usize, usize)>>,
}

fn plan(src: &Presheaf) -> Plan {
    let base = &src.base;
    let mut order = Vec::new();
    for &s in base.sorts_by_dim().iter().rev() {
        for k in 0..src.cells[s].len() {
            order.push((s, k));
        }
    }
    let pos: HashMap<(usize, usize), usize> = order.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut forcers = vec![Vec::new(); order.len()];
    for (p, &(s, k)) in order.iter().enumerate() {
        for &f in base.faces_into(s) {
            let low = (base.face(f).src, src.action[f][k]);
            forcers[pos[&low]].push((p, f));
        }
    }
    Plan { order, forcers }
}

fn extend(plan: &Plan, target: &CellTable, pos: usize, vals: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if pos == plan.order.len() {
        out.push(vals.clone());
        return;
    }
    let (s, _) = plan.order[pos];
    match plan.forcers[pos].split_first() {
        Some((&(p, f), rest)) => {
            let Some(v) = target.action[f][vals[p]] else { return };
            if rest.iter().all(|&(q, g)| target.action[g][vals[q]] == Some(v)) {
                vals.push(v);
                extend(plan, target, pos + 1, vals, out);
                vals.pop();
            }
        }
        None => {
            for v in 0..target.counts[s] {
                vals.push(v);
                extend(plan, target, pos + 1, vals, out);
                vals.pop();
            }
        }
    }
}

/// All natural maps from `src` into `target`, as flat value vectors in the
/// source's flat order, sorted lexicographically.
pub fn enumerate_maps(src: &Presheaf, target: &CellTable, exec: Exec) -> Vec<Vec<usize>> {
    let plan = plan(src);
    let mut found = if plan.order.is_empty() {
        vec![Vec::new()]
    } else {
        let (s0, _) = plan.order[0];
        let chunks = par::map(exec, (0..target.counts[s0]).collect(), |v| {
            let mut out = Vec::new();
            let mut vals = vec![v];
            extend(&plan, target, 1, &mut vals, &mut out);
            out
        });
        chunks.into_iter().flatten().collect::<Vec<_>>()
    };
    // reorder from plan order to flat order
    let flat_pos: Vec<usize> = plan.order.iter().map(|&(s, k)| src.flat(s, k)).collect();
    for vals in &mut found {
        let mut flat = vec![0; vals.len()];
        for (p, &v) in vals.iter().enumerate() {
            flat[flat_pos[p]] = v;
        }
        *vals = flat;
    }
    found.sort();
    found
}

/// All natural transformations `x -> y` in canonical order.
pub fn enumerate_hom(x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Vec<PresheafMorphism>> {
    enumerate_hom_with(Exec::default(), x, y)
}

pub fn enumerate_hom_with(exec: Exec, x: &Arc<Presheaf>, y: &Arc<Presheaf>) -> Result<Vec<PresheafMorphism>> {
    if !same_base(&x.base, &y.base) {
        return Err(Error::BaseMismatch);
    }
    let maps = enumerate_maps(x, &CellTable::from_presheaf(y), exec);
    Ok(maps
        .into_iter()
        .map(|flat| {
            let comps = (0..x.cells.len())
                .map(|s| (0..x.cells[s].len()).map(|k| flat[x.flat(s, k)]).collect())
                .collect();
            PresheafMorphism { src: x.clone(), dst: y.clone(), comps }
        })
        .collect())
}
