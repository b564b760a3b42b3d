//! Independent oracles shared by integration tests.
#![allow(dead_code)]

pub mod lattes_oracle;
