//! Exact solvers for restricted approximate longest common substring
//! problems over sets of strings.
//!
//! Conventions:
//! - string indices in the API are 0-based;
//! - table accessors (`get(p, q)`, `get(l, j)`, `get(a, b, a')`) are 1-based,
//!   matching the positions they describe;
//! - occurrences and witnesses use 0-based half-open ranges.

pub mod edit_prefix;
pub mod error;
pub mod gadgets;
pub mod hamming_lcp;
pub mod indeterminate;
pub mod lengthstat;
pub mod oracle;
pub mod solver;
pub mod strings;

pub use error::{AlcsError, Result};
pub use strings::{
    Alphabet, CostTable, DistanceMetric, IndeterminateString, LetterSet, MetricKind, StringSet,
};
