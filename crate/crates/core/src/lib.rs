//! Computads, their terms and algebras over finite direct categories.

pub mod algebra;
pub mod category;
pub mod cofibrant;
pub mod computad;
pub mod enumerate;
pub mod error;
pub mod factorization;
pub mod fixtures;
pub mod monad;
pub mod packs;
pub mod par;
pub mod plex;
pub mod presheaf;
pub mod signature;
pub mod term;

pub use category::{name, validate_category, Arrow, DirectCategory, Name, RawCategory};
pub use error::{Error, Result};
pub use par::Exec;
pub use presheaf::{enumerate_hom, validate_presheaf, Presheaf, PresheafMorphism, RawPresheaf};
pub use signature::{validate_signature, FunctionSymbol, RawSignature, Signature, SymbolSpec};
pub use term::{boundary, check_term, mk_app, Context, FiniteContext, RawTerm, Term};
pub use computad::{colimit_var, find_isomorphism, free_computad, hom_var, validate_computad, Computad, ComputadMorphism, Diagram, GenSpec};
pub use enumerate::{enumerate_terms, term_levels};
pub use algebra::{check_algebra_morphism, eval, morphism_from_generators, validate_algebra, Algebra, AlgebraView, FreeAlgebra, Interpretation};
pub use plex::{classify, enumerate_polyplexes, nerve, reconstruct, Plex, Polyplex, Representer};
pub use factorization::{image_factorize, is_epi, lift_through_mono, split_idempotent, support_morphism, support_term, Support};
pub use cofibrant::{boundary_inclusion, check_trivial_fibration, skeletal_filtration, underlying_computad, Und};
