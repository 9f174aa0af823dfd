#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod curvature;
pub mod expr;
pub mod forms;
pub mod report;
