//! Holds the `acceptance` test target, which prints one pass/fail line per
//! criterion and exits nonzero if any criterion fails:
//!
//! ```text
//! cargo test -p gevrey-validation --test acceptance
//! ```
