//! Experiment drivers behind the `bbeltrami` binary.
