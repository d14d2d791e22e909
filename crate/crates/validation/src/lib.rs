//! Holds the `acceptance` target, which prints one PASS/FAIL line per
//! criterion and exits nonzero if any fails. It lives in its own package so
//! that a failing run does not stop the other test binaries.
