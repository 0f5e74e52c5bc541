pub mod arith;
pub mod block;
pub mod chr;
pub mod ff;
pub mod galg;
pub mod grp;
pub mod linalg;
pub mod morita;
pub mod quiva;
pub mod ttb0;
pub mod verify;
