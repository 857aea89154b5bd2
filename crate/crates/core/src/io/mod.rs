//! File formats: institution and published-score CSVs, correlation
//! matrices, rankings, event marks, and deterministic CSV output.

mod dataset;
mod format;
mod tables;

pub use dataset::{
    attach_published, ingest_dataset, parse_dataset, parse_published, read_published, DATASET_COLUMNS,
    PUBLISHED_COLUMNS,
};
pub use format::fmt_sig6;
pub use tables::{
    comparison_csv, correlation_matrix_csv, difference_csv, event_totals_csv, inverted_csv,
    parse_correlation_matrix, parse_marks, parse_ranking, pca_csv, ranked_csv, read_correlation_matrix,
    read_marks, read_ranking, score_table_csv, variance_csv, InvertedRow,
};
