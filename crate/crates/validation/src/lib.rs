//! Holds the `acceptance` test target, which checks the library end to end
//! against fixed numerical criteria. The crate has no library code.
