//! Concrete game families: network connectivity games, linear-threshold
//! diffusion and the reach–noise survey game.

mod diffusion;
mod network;
mod survey;

pub use diffusion::{linear_threshold_game, InfluenceModel, LinearThresholdGame};
pub use network::{
    connectivity_game, wconn2_game, wconn_game, Network, NetworkFamily, NetworkGame,
};
pub use survey::{reach_noise_game, ReachNoiseGame, SurveyData};
