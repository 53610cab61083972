//! Predict whether a change to one of two aligned ontologies affects the
//! alignment statements near it.
//!
//! The pipeline merges both ontologies and their reified alignment into one
//! RDF graph, embeds every resource with random walks and skip-gram, labels
//! each changed resource by whether a changed alignment statement lies
//! within two hops, and trains standard classifiers on (vector, label) pairs
//! from one version pair to predict the labels of the next.
//!
//! Modules map onto the stages:
//!
//! - [`rdf`]: N-Triples parsing, the merged graph and BFS distances.
//! - [`alignment`]: correspondences, TSV I/O, reification and deltas.
//! - [`changes`]: per-resource ontology diffs and impact labels.
//! - [`walks`]: random-walk corpus generation.
//! - [`embedding`]: skip-gram negative-sampling training.
//! - [`classify`]: features, the classifier roster and metrics.
//! - [`synth`]: seeded synthetic ontology-evolution scenarios.
//! - [`pipeline`]: end-to-end orchestration and run artifacts.

pub mod alignment;
pub mod changes;
pub mod classify;
pub mod embedding;
pub mod pipeline;
pub mod rdf;
pub mod seeds;
pub mod synth;
pub mod walks;
