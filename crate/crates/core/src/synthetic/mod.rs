//! Gaussian-mixture benchmark comparing the Hellinger certificate with two
//! Wasserstein baselines on a small spectrally normalized network.

pub mod certificates;
pub mod lipschitz;
pub mod network;
pub mod task;

pub use certificates::{
    dual_profile, gramian_certificate_on_task, lipschitz_certificate, wasserstein_dual_certificate,
    BudgetConvention, DualConfig, DualProfile,
};
pub use lipschitz::{jsd_head_constants, lipschitz_profile, HeadConstants, LipschitzProfile};
pub use network::{train_network, train_network_with_history, SmallNetwork, TrainingConfig};
pub use task::{sample_task, shift_distances, GaussianMixtureTask, LabeledData, TaskSample};
