//! Equilibrium classification and orbit-counting reports.
