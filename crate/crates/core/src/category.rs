//! Finite direct categories of sorts.
//!
//! A category is presented by full enumeration: every sort with its
//! dimension, every non-identity face map with its endpoints, and a total
//! composition table for composable pairs of non-identity faces. Identities
//! are implicit. Sorts and faces are kept in lexicographic order of their ids,
//! which fixes the canonical enumeration order used everywhere else.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interned identifier shared by sorts, faces, symbols, cells and generators.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortInfo {
    pub id: Name,
    pub dim: usize,
}

/// A non-identity face map `src -> dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceInfo {
    pub id: Name,
    pub src: usize,
    pub dst: usize,
}

/// A morphism of the category: an identity or a non-identity face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Id(usize),
    Face(usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSort {
    pub id: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFace {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// `second ∘ first`, where `first: k -> j` and `second: j -> i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCompose {
    pub first: String,
    pub second: String,
    pub result: String,
}

/// Unvalidated category description, also the JSON `category` document.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub sorts: Vec<RawSort>,
    #[serde(default)]
    pub faces: Vec<RawFace>,
    #[serde(default)]
    pub compose: Vec<RawCompose>,
}

#[derive(Clone)]
pub struct DirectCategory {
    sorts: Vec<SortInfo>,
    faces: Vec<FaceInfo>,
    sort_ix: HashMap<Name, usize>,
    face_ix: HashMap<Name, usize>,
    compose: HashMap<(usize, usize), usize>,
    into: Vec<Vec<usize>>,
    face_pos: Vec<usize>,
    by_dim: Vec<usize>,
}

impl PartialEq for DirectCategory {
    fn eq(&self, other: &Self) -> bool {
        self.sorts == other.sorts && self.faces == other.faces && self.compose == other.compose
    }
}

impl Eq for DirectCategory {}

impl fmt::Debug for DirectCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectCategory")
            .field("sorts", &self.sorts)
            .field("faces", &self.faces.len())
            .finish()
    }
}

/// Validates a raw description into a [`DirectCategory`].
pub fn validate_category(raw: &RawCategory) -> Result<DirectCategory> {
    let mut sorts: Vec<SortInfo> =
        raw.sorts.iter().map(|s| SortInfo { id: name(&s.id), dim: s.dim }).collect();
    sorts.sort_by(|a, b| a.id.cmp(&b.id));
    for w in sorts.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::DuplicateId(w[0].id.to_string()));
        }
    }
    let sort_ix: HashMap<Name, usize> =
        sorts.iter().enumerate().map(|(i, s)| (s.id.clone(), i)).collect();
    let lookup_sort = |id: &str| sort_ix.get(id).copied().ok_or_else(|| Error::UnknownSort(id.into()));

    let mut faces = Vec::with_capacity(raw.faces.len());
    for f in &raw.faces {
        let src = lookup_sort(&f.src)?;
        let dst = lookup_sort(&f.dst)?;
        if sorts[src].dim >= sorts[dst].dim {
            return Err(Error::DimensionViolation(format!(
                "face `{}`: {} (dim {}) -> {} (dim {})",
                f.id, f.src, sorts[src].dim, f.dst, sorts[dst].dim
            )));
        }
        faces.push(FaceInfo { id: name(&f.id), src, dst });
    }
    faces.sort_by(|a, b| a.id.cmp(&b.id));
    for w in faces.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::DuplicateId(w[0].id.to_string()));
        }
    }
    let face_ix: HashMap<Name, usize> =
        faces.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
    let lookup_face = |id: &str| face_ix.get(id).copied().ok_or_else(|| Error::UnknownFace(id.into()));

    let mut compose = HashMap::new();
    for c in &raw.compose {
        let first = lookup_face(&c.first)?;
        let second = lookup_face(&c.second)?;
        let result = lookup_face(&c.result)?;
        let (g, f, r) = (&faces[first], &faces[second], &faces[result]);
        if g.dst != f.src {
            return Err(Error::CompositionGap(format!(
                "`{}` then `{}` are not composable",
                c.first, c.second
            )));
        }
        if r.src != g.src || r.dst != f.dst {
            return Err(Error::CompositionGap(format!(
                "`{}` has the wrong endpoints for `{}` then `{}`",
                c.result, c.first, c.second
            )));
        }
        if let Some(prev) = compose.insert((first, second), result) {
            if prev != result {
                return Err(Error::CompositionGap(format!(
                    "conflicting entries for `{}` then `{}`",
                    c.first, c.second
                )));
            }
        }
    }

    let mut into = vec![Vec::new(); sorts.len()];
    let mut from = vec![Vec::new(); sorts.len()];
    for (ix, f) in faces.iter().enumerate() {
        into[f.dst].push(ix);
        from[f.src].push(ix);
    }
    // totality of the table
    for (first, g) in faces.iter().enumerate() {
        for &second in &from[g.dst] {
            if !compose.contains_key(&(first, second)) {
                return Err(Error::CompositionGap(format!(
                    "missing composite of `{}` then `{}`",
                    g.id, faces[second].id
                )));
            }
        }
    }
    // associativity: (h then g) then f == h then (g then f)
    for (h, hf) in faces.iter().enumerate() {
        for &g in &from[hf.dst] {
            for &f in &from[faces[g].dst] {
                let left = compose[&(compose[&(h, g)], f)];
                let right = compose[&(h, compose[&(g, f)])];
                if left != right {
                    return Err(Error::AssociativityFailure(format!(
                        "`{}`, `{}`, `{}`",
                        hf.id, faces[g].id, faces[f].id
                    )));
                }
            }
        }
    }

    let mut face_pos = vec![0; faces.len()];
    for list in &into {
        for (pos, &f) in list.iter().enumerate() {
            face_pos[f] = pos;
        }
    }
    let mut by_dim: Vec<usize> = (0..sorts.len()).collect();
    by_dim.sort_by_key(|&i| (sorts[i].dim, i));

    Ok(DirectCategory { sorts, faces, sort_ix, face_ix, compose, into, face_pos, by_dim })
}

impl DirectCategory {
    pub fn sorts(&self) -> &[SortInfo] {
        &self.sorts
    }

    pub fn sort(&self, i: usize) -> &SortInfo {
        &self.sorts[i]
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.sorts[i].dim
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.sorts.iter().map(|s| s.dim).max()
    }

    pub fn sort_index(&self, id: &str) -> Result<usize> {
        self.sort_ix.get(id).copied().ok_or_else(|| Error::UnknownSort(id.into()))
    }

    pub fn faces(&self) -> &[FaceInfo] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &FaceInfo {
        &self.faces[f]
    }

    pub fn face_index(&self, id: &str) -> Result<usize> {
        self.face_ix.get(id).copied().ok_or_else(|| Error::UnknownFace(id.into()))
    }

    /// Non-identity faces with target `i`, in id order.
    pub fn faces_into(&self, i: usize) -> &[usize] {
        &self.into[i]
    }

    /// Position of `f` within `faces_into(dst f)`.
    pub fn face_position(&self, f: usize) -> usize {
        self.face_pos[f]
    }

    /// Sort indices ordered by increasing dimension (ties by id).
    pub fn sorts_by_dim(&self) -> &[usize] {
        &self.by_dim
    }

    /// Distinct dimensions in increasing order.
    pub fn dims(&self) -> Vec<usize> {
        self.sorts.iter().map(|s| s.dim).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// `second ∘ first` for non-identity faces, if composable.
    pub fn compose_faces(&self, first: usize, second: usize) -> Option<usize> {
        self.compose.get(&(first, second)).copied()
    }

    pub fn arrow_src(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(i) => i,
            Arrow::Face(f) => self.faces[f].src,
        }
    }

    pub fn arrow_dst(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(i) => i,
            Arrow::Face(f) => self.faces[f].dst,
        }
    }

    /// `second ∘ first`.
    pub fn compose(&self, first: Arrow, second: Arrow) -> Result<Arrow> {
        if self.arrow_dst(first) != self.arrow_src(second) {
            return Err(Error::CompositionGap(format!(
                "`{}` then `{}` are not composable",
                self.arrow_name(first),
                self.arrow_name(second)
            )));
        }
        Ok(match (first, second) {
            (Arrow::Id(_), a) | (a, Arrow::Id(_)) => a,
            (Arrow::Face(g), Arrow::Face(f)) => Arrow::Face(self.compose[&(g, f)]),
        })
    }

    pub fn arrow_name(&self, a: Arrow) -> String {
        match a {
            Arrow::Id(i) => identity_name(&self.sorts[i].id),
            Arrow::Face(f) => self.faces[f].id.to_string(),
        }
    }

    /// `hom(j, i)`: the identity (when `j == i`) followed by faces in id order.
    pub fn hom(&self, j: usize, i: usize) -> Vec<Arrow> {
        let mut out = Vec::new();
        if i == j {
            out.push(Arrow::Id(i));
        }
        out.extend(self.into[i].iter().filter(|&&f| self.faces[f].src == j).map(|&f| Arrow::Face(f)));
        out
    }

    /// Full subcategory on the sorts of dimension at most `n`.
    pub fn truncate(&self, n: usize) -> DirectCategory {
        let keep = |s: usize| self.sorts[s].dim <= n;
        let raw = RawCategory {
            sorts: self
                .sorts
                .iter()
                .filter(|s| s.dim <= n)
                .map(|s| RawSort { id: s.id.to_string(), dim: s.dim })
                .collect(),
            faces: self
                .faces
                .iter()
                .filter(|f| keep(f.dst))
                .map(|f| RawFace {
                    id: f.id.to_string(),
                    src: self.sorts[f.src].id.to_string(),
                    dst: self.sorts[f.dst].id.to_string(),
                })
                .collect(),
            compose: self.raw_compose(|_, second| keep(self.faces[second].dst)),
        };
        validate_category(&raw).expect("full subcategory of a valid category is valid")
    }

    fn raw_compose(&self, keep: impl Fn(usize, usize) -> bool) -> Vec<RawCompose> {
        let mut entries: Vec<_> = self
            .compose
            .iter()
            .filter(|((g, f), _)| keep(*g, *f))
            .map(|(&(g, f), &r)| RawCompose {
                first: self.faces[g].id.to_string(),
                second: self.faces[f].id.to_string(),
                result: self.faces[r].id.to_string(),
            })
            .collect();
        entries.sort_by(|a, b| (&a.first, &a.second).cmp(&(&b.first, &b.second)));
        entries
    }

    pub fn to_raw(&self) -> RawCategory {
        RawCategory {
            sorts: self.sorts.iter().map(|s| RawSort { id: s.id.to_string(), dim: s.dim }).collect(),
            faces: self
                .faces
                .iter()
                .map(|f| RawFace {
                    id: f.id.to_string(),
                    src: self.sorts[f.src].id.to_string(),
                    dst: self.sorts[f.dst].id.to_string(),
                })
                .collect(),
            compose: self.raw_compose(|_, _| true),
        }
    }
}

/// Name of the identity arrow on a sort, used for the top cell of representables.
pub fn identity_name(sort: &str) -> String {
    format!("id_{sort}")
}

/// The walking arrow: sorts `o` (dim 0) and `a` (dim 1) with faces `s, t: o -> a`.
pub fn arrow_category() -> DirectCategory {
    let raw = RawCategory {
        sorts: vec![RawSort { id: "o".into(), dim: 0 }, RawSort { id: "a".into(), dim: 1 }],
        faces: vec![
            RawFace { id: "s".into(), src: "o".into(), dst: "a".into() },
            RawFace { id: "t".into(), src: "o".into(), dst: "a".into() },
        ],
        compose: vec![],
    };
    validate_category(&raw).expect("arrow category is valid")
}
