#![allow(clippy::needless_range_loop)]

pub mod commands;
pub mod config;
pub mod json;
pub mod render;
pub mod verify;
