//! Heavy path WSPD spanners with compact routing tables and memoryless
//! local routing, for Euclidean point sets (compressed quadtrees) and
//! doubling metrics (net trees).
//!
//! ```
//! use hpws_core::{harness::random::uniform_points, Network};
//!
//! let net = Network::euclidean(uniform_points(50, 2, 1).unwrap(), 4.0).unwrap();
//! let route = net.route_points(0, 1).unwrap();
//! assert_eq!(route.labels.last(), Some(&net.label(1)));
//! ```

pub mod decomposition;
pub mod error;
pub mod harness;
pub mod io;
pub mod metric;
pub mod nettree;
pub mod network;
pub mod quadtree;
pub mod routing;
pub mod spanner;
pub mod tree;
pub mod wspd;

pub use decomposition::{HeavyPathLabelling, Interval, Label, TieBreak};
pub use error::{Error, Result};
pub use metric::{DistanceMatrix, Hypercube, Point, PointSet, Space};
pub use nettree::{NetTree, NetTreeParams};
pub use network::{Network, Tree};
pub use quadtree::Quadtree;
pub use routing::{route, route_step, Phase, Route, RoutingEntry, RoutingTable, RoutingTables};
pub use spanner::{build_path, SpannerGraph, SpannerPath};
pub use tree::{Hierarchy, NodeId};
pub use wspd::{SeparationRule, Wspd, WspdPair};
