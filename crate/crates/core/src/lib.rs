//! Coxeter systems and the witnesses for virtually splitting `Aut(W) → Out(W)`:
//! spherical parabolic subgroups, their geometric-representation data, the
//! word problem, finite permutation quotients, and checkable certificates.

pub mod canonical;
pub mod cayley;
pub mod certify;
pub mod classify;
pub mod error;
pub mod evidence;
pub mod field;
pub mod quotient;
pub mod system;
pub mod tits;
pub mod word;

pub use canonical::to_canonical_json;
pub use cayley::{cayley_enumerate, center_order, is_w0_central, longest_element, ElementTable, CAYLEY_CAP};
pub use certify::{
    certify_bp, default_witness, verify_certificate, BPCertificate, CheckEvidence, CheckResult, ConditionId,
    Justification, Overall, Verdict, VerifyError,
};
pub use classify::{
    classify_finite_type, enumerate_spherical_subsets, is_spherical, maximal_spherical_subsets, order_of,
    parabolic_order, spherical_extensions, FiniteType, TypeDecomposition,
};
pub use error::{Error, ParseError, Result};
pub use evidence::{centralizer_evidence, normalizer_evidence, separation_evidence, Evidence, EvidenceKind};
pub use field::{
    cos_pi_over, gram_matrix, is_positive_definite, nullity, reflection_matrix, AlgebraicReal, CyclotomicField,
    ExactMatrix, Sign,
};
pub use quotient::{
    search_quotients, search_quotients_parallel, separate_element, verify_quotient, Perm, PermQuotient,
};
pub use system::{parse_coxeter_system, CoxeterSystem, Order, Subset};
pub use tits::{tits_reduce_oracle, ORACLE_CAP};
pub use word::{is_left_descent, is_right_descent, length, same_element, shortlex_normal_form, NormalForm, Word};
