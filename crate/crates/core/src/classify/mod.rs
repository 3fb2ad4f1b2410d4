//! Classifiers and cross-validation machinery.

pub mod cv;
pub mod lda;
pub mod svm;

pub use cv::{
    cross_validate, cross_validate_with, stratified_kfold, ClassifierSpec, CvOptions,
    FoldIndices, FoldMetrics, KernelSpec, PerformanceReport,
};
pub use lda::{lda_fit, lda_predict, LdaModel};
pub use svm::{svm_fit, svm_predict, Kernel, SvmModel};
