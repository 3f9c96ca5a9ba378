#![allow(dead_code)]

pub mod ball;
pub mod expr;
pub mod oracles;
