//! Semi-simplicial sorts, horns and the signature of algebraic Kan complexes.
//!
//! The face `[m] -> [n]` missing the vertices `{k1, ..}` is called
//! `d{n}^{k1,..}`, so `δ_k^n` is `d{n}^{k}`.

use std::sync::Arc;

use crate::category::{name, validate_category, DirectCategory, RawCategory, RawCompose, RawFace, RawSort};
use crate::error::{Error, Result};
use crate::presheaf::{boundary_representable, representable, Presheaf};
use crate::signature::{Signature, SymbolSpec};
use crate::term::Term;

pub fn simplex_sort(n: usize) -> String {
    format!("[{n}]")
}

fn missing(n: usize, image: &[usize]) -> Vec<usize> {
    (0..=n).filter(|v| !image.contains(v)).collect()
}

fn face_name(n: usize, image: &[usize]) -> String {
    let m: Vec<String> = missing(n, image).iter().map(usize::to_string).collect();
    format!("d{n}^{}", m.join(","))
}

/// `δ_k^n`.
pub fn delta(n: usize, k: usize) -> String {
    format!("d{n}^{k}")
}

/// Strictly monotone maps `[m] -> [n]`, `m < n`, as sorted images.
fn injections(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            if n - v + 1 < left {
                break;
            }
            cur.push(v);
            go(v + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m + 1, &mut Vec::new(), &mut out);
    out
}

/// `Δ₊` truncated at dimension `n`.
pub fn delta_plus(n: usize) -> Result<DirectCategory> {
    let sorts = (0..=n).map(|k| RawSort { id: simplex_sort(k), dim: k }).collect();
    let mut faces = Vec::new();
    let mut by_dst: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); n + 1];
    for i in 1..=n {
        for j in 0..i {
            for img in injections(j, i) {
                faces.push(RawFace { id: face_name(i, &img), src: simplex_sort(j), dst: simplex_sort(i) });
                by_dst[i].push((j, img));
            }
        }
    }
    let mut compose = Vec::new();
    for i in 0..=n {
        for (j, second) in &by_dst[i] {
            for (_, first) in &by_dst[*j] {
                let img: Vec<usize> = first.iter().map(|&v| second[v]).collect();
                compose.push(RawCompose {
                    first: face_name(*j, first),
                    second: face_name(i, second),
                    result: face_name(i, &img),
                });
            }
        }
    }
    validate_category(&RawCategory { sorts, faces, compose })
}

fn check_dim(base: &DirectCategory, m: usize) -> Result<()> {
    if base.max_dim().is_none_or(|d| m > d) {
        return Err(Error::BadIndex(format!("[{m}] is above the truncation")));
    }
    Ok(())
}

/// `Δ[m]`.
pub fn simplex(base: &Arc<DirectCategory>, m: usize) -> Result<Presheaf> {
    check_dim(base, m)?;
    representable(base, &simplex_sort(m))
}

/// `∂Δ[m]`.
pub fn boundary_simplex(base: &Arc<DirectCategory>, m: usize) -> Result<Presheaf> {
    check_dim(base, m)?;
    Ok(boundary_representable(base, &simplex_sort(m))?.0)
}

/// `Λ^k[m]`: `∂Δ[m]` without the face `δ_k^m`.
pub fn horn(base: &Arc<DirectCategory>, m: usize, k: usize) -> Result<Presheaf> {
    check_dim(base, m)?;
    if m == 0 || k > m {
        return Err(Error::BadIndex(format!("no horn Λ^{k}[{m}]")));
    }
    let gone = delta(m, k);
    Ok(boundary_simplex(base, m)?.sub(|_, c| **c != *gone)?.0)
}

pub fn face_symbol(k: usize, n: usize) -> String {
    format!("face_{k}_{n}")
}

pub fn filler_symbol(k: usize, n: usize) -> String {
    format!("filler_{k}_{n}")
}

fn cell_vars(x: &Presheaf) -> Vec<Term> {
    (0..x.total())
        .map(|m| {
            let (s, k) = x.unflat(m);
            Term::Var(x.cell_name(s, k).clone())
        })
        .collect()
}

/// The Kan signature over `Δ₊≤n`: `face_{k,m+1}` of sort `[m]` for
/// `m + 1 ≤ n` and `filler_{k,m}` of sort `[m]` for `1 ≤ m ≤ n`.
pub fn sigma_kan(n: usize) -> Result<Signature> {
    if n == 0 {
        return Err(Error::BadIndex("the Kan signature needs n ≥ 1".into()));
    }
    let base = Arc::new(delta_plus(n)?);
    let mut specs = Vec::new();
    for m in 0..n {
        let i = base.sort_index(&simplex_sort(m))?;
        for k in 0..=m + 1 {
            let arity = Arc::new(horn(&base, m + 1, k)?);
            let dk = base.face_index(&delta(m + 1, k))?;
            let boundary = base
                .faces_into(i)
                .iter()
                .map(|&d| {
                    let c = base.compose_faces(d, dk).expect("composable");
                    (d, Term::Var(base.face(c).id.clone()))
                })
                .collect();
            specs.push(SymbolSpec { id: name(&face_symbol(k, m + 1)), sort: i, arity, boundary });
        }
    }
    for m in 1..=n {
        let i = base.sort_index(&simplex_sort(m))?;
        for k in 0..=m {
            let arity = Arc::new(horn(&base, m, k)?);
            let dk = base.face_index(&delta(m, k))?;
            let boundary = base
                .faces_into(i)
                .iter()
                .map(|&d| {
                    let t = if d == dk {
                        Term::app(name(&face_symbol(k, m)), cell_vars(&arity))
                    } else {
                        Term::Var(base.face(d).id.clone())
                    };
                    (d, t)
                })
                .collect();
            specs.push(SymbolSpec { id: name(&filler_symbol(k, m)), sort: i, arity, boundary });
        }
    }
    Signature::new(base, specs)
}
