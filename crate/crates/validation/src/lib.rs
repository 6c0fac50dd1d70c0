//! Acceptance suite for the `wehrl` library.
//!
//! The criteria live in `tests/acceptance.rs` and run with
//! `cargo test -p wehrl-validation --test acceptance`.
