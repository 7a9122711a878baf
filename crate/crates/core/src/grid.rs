//! Evaluation grids.

/// `count` equally spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + step * i as f64).collect()
}

/// The default verification grid: 401 points on [-20, 20]. Wide enough to
/// cover the branch-argument maximizer sqrt(beta/a) for all shipped presets.
pub fn default_grid() -> Vec<f64> {
    linspace(-20.0, 20.0, 401)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_count() {
        let g = linspace(-20.0, 20.0, 401);
        assert_eq!(g.len(), 401);
        assert_eq!(g[0], -20.0);
        assert_eq!(g[400], 20.0);
        assert!((g[200]).abs() < 1e-12);
    }
}
