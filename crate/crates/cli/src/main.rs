//! `cptd`: load computads, terms and algebras from JSON and run kernel
//! operations on them.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use computads::algebra::{validate_algebra, FreeAlgebra, RawAlgebra};
use computads::category::RawCategory;
use computads::cofibrant::replay;
use computads::computad::{validate_morphism, RawComputad, RawMorphism};
use computads::packs::{globular, grid, kan, universal};
use computads::plex::{classify, enumerate_polyplexes, nerve, polyplex_to_raw, Polyplex};
use computads::presheaf::RawPresheaf;
use computads::signature::RawSignature;
use computads::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cptd", version, about = "Computads, terms and algebras over finite direct categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Entity arguments take a path to a JSON file or inline JSON.
#[derive(Subcommand)]
enum Command {
    /// Validate a category, presheaf, signature, computad, morphism, algebra or term document.
    Check { file: String },
    /// The boundary of a term along a face.
    Boundary {
        #[arg(long)]
        face: String,
        #[arg(long)]
        term: String,
        #[arg(long)]
        computad: Option<String>,
    },
    /// Apply a morphism to a term over its source.
    Apply {
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        term: String,
    },
    /// All terms of a sort up to a depth.
    Enumerate {
        #[arg(long)]
        computad: String,
        #[arg(long)]
        sort: String,
        #[arg(long)]
        depth: usize,
    },
    /// The polyplex of a term.
    Classify {
        #[arg(long)]
        term: String,
        #[arg(long)]
        computad: Option<String>,
    },
    /// All polyplexes of a sort up to a depth.
    Plexes {
        #[arg(long)]
        sig: String,
        #[arg(long)]
        sort: String,
        #[arg(long)]
        max_depth: usize,
    },
    /// Generators grouped by plex.
    Nerve {
        #[arg(long)]
        computad: String,
    },
    /// Support of a morphism, or of a term.
    Support {
        #[arg(long, conflicts_with = "term")]
        morphism: Option<String>,
        #[arg(long)]
        term: Option<String>,
        #[arg(long)]
        computad: Option<String>,
    },
    /// Image factorisation into an epimorphism and a variable-to-variable monomorphism.
    Factorize {
        #[arg(long)]
        morphism: String,
    },
    /// Split an idempotent endomorphism.
    Split {
        #[arg(long)]
        morphism: String,
    },
    /// Evaluate a term whose variables are carrier cells.
    Eval {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        term: String,
    },
    /// Skeletal filtration, replayed by attaching cells.
    Filtration {
        #[arg(long)]
        computad: String,
    },
    /// Underlying computad of an algebra and its counit.
    Cofrep {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        depth: usize,
    },
    /// Check that the counit out of the free algebra on the underlying computad is a trivial fibration.
    CheckTfib {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        depth: usize,
    },
    /// Emit an example signature.
    #[command(subcommand)]
    Example(Example),
}

#[derive(Subcommand)]
enum Example {
    /// Algebraic Kan complexes truncated at a dimension.
    Kan {
        #[arg(long)]
        dim: usize,
    },
    /// Composites of a grid and its faces, e.g. `--counts 4,1`.
    Grid {
        #[arg(long, value_delimiter = ',', required = true)]
        counts: Vec<usize>,
    },
    /// Groups.
    Group,
    /// Modules over rings.
    Module,
    /// A named fixture: `walk2`, `comp-uv`, `disk-a`, `pathcat` or `z5`.
    Fixture { name: String },
    /// Composites of a pasting diagram, e.g. `--tree '[[][]]'`.
    Cat {
        #[arg(long)]
        tree: String,
        #[arg(long)]
        groupoidal: bool,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Out = Result<(Value, bool), Failure>;

fn load(arg: &str) -> Result<Value, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Usage(format!("cannot read `{arg}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("`{arg}` is not JSON: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Invalid(format!("malformed {what}: {e}")))
}

fn computad(arg: &str) -> Result<Arc<Computad>, Failure> {
    let raw: RawComputad = parse(load(arg)?, "computad")?;
    Ok(Arc::new(validate_computad(&raw)?))
}

fn morphism(arg: &str) -> Result<ComputadMorphism, Failure> {
    let raw: RawMorphism = parse(load(arg)?, "morphism")?;
    Ok(validate_morphism(&raw)?)
}

fn algebra(arg: &str) -> Result<Algebra, Failure> {
    let raw: RawAlgebra = parse(load(arg)?, "algebra")?;
    Ok(validate_algebra(&raw)?)
}

/// A term document `{computad, term}`, or a bare term with `--computad`.
fn term_in(term: &str, c: Option<&str>) -> Result<(Arc<Computad>, Term), Failure> {
    let mut v = load(term)?;
    let (c, raw) = match (v.get("computad").is_some(), c) {
        (true, _) => {
            let raw: RawComputad = parse(v["computad"].take(), "computad")?;
            (Arc::new(validate_computad(&raw)?), v["term"].take())
        }
        (false, Some(c)) => (computad(c)?, v),
        (false, None) => return Err(Failure::Usage("--term is a bare term, so --computad is required".into())),
    };
    let raw: RawTerm = parse(raw, "term")?;
    let t = Term::from_raw(&raw, c.signature())?;
    check_term(&*c, &t)?;
    Ok((c, t))
}

/// The term of a term document, or a bare term.
fn bare_term(arg: &str) -> Result<RawTerm, Failure> {
    let mut v = load(arg)?;
    if v.get("term").is_some() {
        v = v["term"].take();
    }
    parse(v, "term")
}

fn term_json(t: &Term, c: &Computad) -> Value {
    serde_json::to_value(t.to_raw(c.signature())).expect("terms serialise")
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("raw entities serialise")
}

fn sort_index(base: &DirectCategory, sort: &str) -> Result<usize, Failure> {
    Ok(base.sort_index(sort)?)
}

fn support_json(c: &Computad, s: &Support) -> Value {
    let base = c.base();
    let m: BTreeMap<String, Vec<String>> = (0..base.sort_count())
        .map(|i| (base.sort(i).id.to_string(), s.names(c, i).iter().map(|n| n.to_string()).collect()))
        .collect();
    to_json(&m)
}

fn check(file: &str) -> Out {
    let v = load(file)?;
    let has = |k: &str| v.get(k).is_some();
    let (kind, summary) = if has("compose") {
        let c = validate_category(&parse::<RawCategory>(v, "category")?)?;
        ("category", json!({"sorts": c.sort_count(), "faces": c.faces().len()}))
    } else if has("symbols") {
        let s = validate_signature(&parse::<RawSignature>(v, "signature")?)?;
        ("signature", json!({"symbols": s.symbols().iter().map(|f| f.id.to_string()).collect::<Vec<_>>()}))
    } else if has("src") && has("dst") {
        let m = validate_morphism(&parse::<RawMorphism>(v, "morphism")?)?;
        ("morphism", json!({"var_to_var": m.is_var_to_var(), "epi": is_epi(&m)}))
    } else if has("carrier") {
        let a = validate_algebra(&parse::<RawAlgebra>(v, "algebra")?)?;
        ("algebra", json!({"cells": a.carrier().total()}))
    } else if has("term") && has("computad") {
        let (c, t) = term_in(file, None)?;
        let s = check_term(&*c, &t)?;
        ("term", json!({"sort": c.base().sort(s).id.to_string(), "depth": t.depth()}))
    } else if has("signature") {
        let c = validate_computad(&parse::<RawComputad>(v, "computad")?)?;
        ("computad", json!({"generators": c.total_gens(), "dimension": c.dimension()}))
    } else if has("cells") {
        let p = validate_presheaf(&parse::<RawPresheaf>(v, "presheaf")?)?;
        ("presheaf", json!({"cells": p.total()}))
    } else {
        return Err(Failure::Invalid(format!("`{file}` is not a recognised entity")));
    };
    Ok((json!({"kind": kind, "valid": true, "summary": summary}), true))
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Check { file } => check(&file),
        Command::Boundary { face, term, computad } => {
            let (c, t) = term_in(&term, computad.as_deref())?;
            let f = c.base().face_index(&face)?;
            let b = boundary(&*c, f, &t)?;
            Ok((term_json(&b, &c), true))
        }
        Command::Apply { morphism: m, term } => {
            let m = morphism(&m)?;
            let raw = bare_term(&term)?;
            let t = Term::from_raw(&raw, m.src().signature())?;
            check_term(&**m.src(), &t)?;
            Ok((term_json(&m.apply(&t)?, m.dst()), true))
        }
        Command::Enumerate { computad: c, sort, depth } => {
            let c = computad(&c)?;
            let s = sort_index(c.base(), &sort)?;
            let ts = enumerate_terms(&*c, s, depth)?;
            let terms: Vec<Value> = ts.iter().map(|t| term_json(t, &c)).collect();
            Ok((json!({"sort": sort, "depth": depth, "count": ts.len(), "terms": terms}), true))
        }
        Command::Classify { term, computad } => {
            let (c, t) = term_in(&term, computad.as_deref())?;
            let p = classify(&c, &t)?;
            Ok((to_json(&polyplex_to_raw(&p, c.signature())), true))
        }
        Command::Plexes { sig, sort, max_depth } => {
            let mut v = load(&sig)?;
            if v.get("signature").is_some() {
                v = v["signature"].take();
            }
            let sig = validate_signature(&parse::<RawSignature>(v, "signature")?)?;
            let s = sort_index(sig.base(), &sort)?;
            let ps: Vec<Polyplex> = enumerate_polyplexes(&sig, s, max_depth)?;
            Ok((Value::Array(ps.iter().map(|p| to_json(&polyplex_to_raw(p, &sig))).collect()), true))
        }
        Command::Nerve { computad: c } => {
            let c = computad(&c)?;
            let n = nerve(&c)?;
            let fibres: Vec<Value> = n
                .fibres
                .iter()
                .map(|(p, gs)| {
                    json!({
                        "plex": to_json(&polyplex_to_raw(&Term::Var(p.clone()), c.signature())),
                        "generators": gs.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Ok((json!({"fibres": fibres}), true))
        }
        Command::Support { morphism: Some(m), .. } => {
            let m = morphism(&m)?;
            let s = support_morphism(&m);
            Ok((json!({"support": support_json(m.dst(), &s), "full": s.is_full(m.dst())}), true))
        }
        Command::Support { term: Some(term), computad, .. } => {
            let (c, t) = term_in(&term, computad.as_deref())?;
            let s = support_term(&c, &t)?;
            Ok((json!({"support": support_json(&c, &s)}), true))
        }
        Command::Support { .. } => Err(Failure::Usage("support needs --morphism or --term".into())),
        Command::Factorize { morphism: m } => {
            let m = morphism(&m)?;
            let f = image_factorize(&m)?;
            Ok((
                json!({
                    "pi": to_json(&f.pi.to_raw()),
                    "middle": to_json(&f.middle.to_raw()),
                    "iota": to_json(&f.iota.to_raw()),
                    "epi": is_epi(&m),
                }),
                true,
            ))
        }
        Command::Split { morphism: m } => {
            let s = split_idempotent(&morphism(&m)?)?;
            Ok((
                json!({
                    "retraction": to_json(&s.retraction.to_raw()),
                    "section": to_json(&s.section.to_raw()),
                    "object": to_json(&s.object.to_raw()),
                }),
                true,
            ))
        }
        Command::Eval { algebra: a, term } => {
            let a = algebra(&a)?;
            let t = Term::from_raw(&bare_term(&term)?, a.signature())?;
            let (s, v) = a.eval_term(&t)?;
            let sort = a.carrier().base().sort(s).id.to_string();
            Ok((json!({"sort": sort, "value": a.carrier().cell_name(s, v).to_string()}), true))
        }
        Command::Filtration { computad: c } => {
            let c = computad(&c)?;
            let f = skeletal_filtration(&c)?;
            let r = replay(&f)?;
            let base = c.base();
            let stages: Vec<Value> = f
                .stages
                .iter()
                .map(|st| {
                    let attached: Vec<Value> = st
                        .attached
                        .iter()
                        .map(|a| {
                            let (s, k) = c.gen_index(&a.name).expect("generator");
                            let gluing: BTreeMap<String, Value> = base
                                .faces_into(s)
                                .iter()
                                .zip(c.gluing_family(s, k))
                                .map(|(&f, t)| (base.face(f).id.to_string(), term_json(t, &c)))
                                .collect();
                            json!({"gen": a.name.to_string(), "sort": base.sort(a.sort).id.to_string(), "gluing": gluing})
                        })
                        .collect();
                    json!({"dim": st.dim, "generators": st.computad.total_gens(), "attached": attached})
                })
                .collect();
            let ok = r.stages_match.iter().all(|&b| b)
                && !r.pushouts_match.contains(&Some(false))
                && computads::computad::is_isomorphic(&r.result, &c);
            Ok((
                json!({
                    "stages": stages,
                    "replay": {"stages_match": r.stages_match, "pushouts_match": r.pushouts_match, "isomorphic": ok},
                }),
                ok,
            ))
        }
        Command::Cofrep { algebra: a, depth } => {
            let a = algebra(&a)?;
            let u = underlying_computad(&a, depth)?;
            let r = u.counit(&a)?;
            let counit: BTreeMap<String, String> = (0..a.carrier().base().sort_count())
                .flat_map(|s| u.computad.gens(s).iter().zip(&r.values[s]).map(move |(g, &v)| (s, g, v)))
                .map(|(s, g, v)| (g.to_string(), a.carrier().cell_name(s, v).to_string()))
                .collect();
            Ok((json!({"exact": u.exact, "depth": depth, "computad": to_json(&u.computad.to_raw()), "counit": counit}), true))
        }
        Command::CheckTfib { algebra: a, depth } => {
            let a = algebra(&a)?;
            let u = underlying_computad(&a, depth)?;
            let r = u.counit(&a)?;
            let cof = FreeAlgebra::new(u.computad.clone(), depth)?;
            let sigma = |_: usize, t: &Term| r.eval(&a, t);
            let sorts: Vec<usize> = (0..a.carrier().base().sort_count()).collect();
            let cex = check_trivial_fibration(&cof, &a, &sigma, &sorts)?;
            let base = a.carrier().base();
            let cex_json = cex.as_ref().map(|c| {
                json!({"sort": base.sort(c.sort).id.to_string(), "target": c.target, "boundary": c.boundary})
            });
            let verdict = cex.is_none();
            Ok((
                json!({"trivial_fibration": verdict, "exact": u.exact && cof.is_exact(), "counterexample": cex_json}),
                verdict,
            ))
        }
        Command::Example(Example::Fixture { name }) => {
            use computads::fixtures as fx;
            let v = match name.as_str() {
                "walk2" => to_json(&fx::walk2().to_raw()),
                "comp-uv" => {
                    let w = fx::walk2();
                    json!({"computad": to_json(&w.to_raw()), "term": term_json(&fx::comp_uv(), &w)})
                }
                "disk-a" => to_json(&fx::disk(&Arc::new(fx::sigma_comp()), "a").to_raw()),
                "pathcat" => to_json(&fx::pathcat().to_raw()),
                "z5" => to_json(&fx::z5_group().to_raw()),
                other => return Err(Failure::Usage(format!("no fixture named `{other}`"))),
            };
            Ok((v, true))
        }
        Command::Example(e) => {
            let sig = match e {
                Example::Fixture { .. } => unreachable!("handled above"),
                Example::Kan { dim } => kan::sigma_kan(dim)?,
                Example::Grid { counts } => grid::composite_signature(&counts)?,
                Example::Group => universal::group_signature(),
                Example::Module => universal::module_signature(),
                Example::Cat { tree, groupoidal } => {
                    let b: globular::Tree = tree.parse().map_err(|e: Error| Failure::Usage(format!("--tree: {e}")))?;
                    globular::composite_signature(&b, groupoidal)?
                }
            };
            Ok((to_json(&sig.to_raw()), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((v, ok)) => {
            let text = serde_json::to_string_pretty(&v).expect("json");
            if writeln!(std::io::stdout(), "{text}").is_err() {
                return ExitCode::from(1);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
