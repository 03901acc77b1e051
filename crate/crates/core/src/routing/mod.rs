//! Dual-system routing: nominal routes, trace-trained recovery matrix and
//! the kernel that combines them.

pub mod config;
pub mod distribution;
pub mod io;
pub mod kernel;
pub mod matrix;
pub mod nominal;
pub mod tensor;

pub use config::{trace_weight, Ablation, StatusMode, TrainingConfig};
pub use distribution::Distribution;
pub use io::{load_matrix, save_matrix};
pub use kernel::{KernelMeta, RoutingKernel, RANDOM_TARGETS};
pub use matrix::{normalize, support, RecoveryMatrix};
pub use nominal::{NominalRouteTable, MAX_PATH_LEN};
pub use tensor::{train_count_tensor, CountTensor};
