//! Modular versus norm convergence of function sequences, in the
//! Lebesgue-based (L) and gauge-based (H) senses.

mod analysis;
mod classify;
mod corpus;
mod implications;
mod search;

pub use analysis::{
    aggregate, convergence_report, modular_convergence, norm_convergence, select_best_k,
    ConvergenceReport, ModularAnalysis, NormAnalysis, Verdicts, CSV_HEADER,
};
pub use classify::{classify, log_log_slope, Classification, ClassifierConfig, Verdict};
pub use corpus::{standard_corpus, CorpusEntry};
pub use implications::{
    evaluate_implications, implication_check, ImplicationRow, ImplicationStatus, ImplicationTable,
    Origin, Sense, IMPLICATIONS,
};
pub use search::{
    candidate_kinds, counterexample_search, tall_indicator, Candidate, CandidateKind,
    FamilyTemplate, Instance, SearchResult, TemplateVariant,
};
