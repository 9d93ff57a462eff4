//! Pattern splits, total-occurrence sequences, and the Bóna-class census.

mod average;
mod classes;
mod split;

pub use average::{average_sequence, AverageEngine, AverageSequence, Count};
pub use classes::{
    bona_census_123, bona_census_132, expected_count, partition_numbers, partition_table, BonaClass, Census,
    CensusReport, ClassSummary, DEFAULT_PREFIX_LEN, PROVED_132_MAX_K, PUBLISHED_123, REPORT_VALUES,
};
pub use split::{split_decompose, SplitDecomposition, SplitTerm};

#[cfg(test)]
mod tests;
