use pseudomode_control::control::OptimOptions;
use pseudomode_control::dynamics::{
    constant_propagator, rk4_reference, weak_coupling_population, ReducedState, SystemParams,
};
use pseudomode_control::reachable::{
    classify, map_options, map_reachable, prescan_constant, solve_target, CellStatus, GridSpec,
};
use pseudomode_control::ControlField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn strong() -> SystemParams {
    SystemParams::new(5f64.sqrt(), 1.0).unwrap()
}

fn free_pop(params: &SystemParams, t: f64) -> f64 {
    constant_propagator(params, 0.0, t).unwrap().u11.norm_sqr()
}

#[test]
fn classification_thresholds() {
    assert_eq!(classify(0.005, 0.05), CellStatus::Reached);
    assert_eq!(classify(0.0099999, 0.05), CellStatus::Reached);
    assert_eq!(classify(0.01, 0.05), CellStatus::Near);
    assert_eq!(classify(0.03, 0.05), CellStatus::Near);
    assert_eq!(classify(0.05, 0.05), CellStatus::Unreached);
    assert_eq!(classify(0.5, 0.05), CellStatus::Unreached);
    assert_eq!(classify(f64::INFINITY, 0.05), CellStatus::Unreached);
}

#[test]
fn single_cell_on_free_trajectory_is_reached() {
    let params = strong();
    // half-time where the free population crosses the single cell's center 0.5
    let (mut a, mut b) = (0.0, 0.5);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if free_pop(&params, m) > 0.5 {
            a = m;
        } else {
            b = m;
        }
    }
    let grid = GridSpec::new(a + b, 1, 1, 10.0, ReducedState::excited()).unwrap();
    let map = map_reachable(&params, &grid, &OptimOptions::default(), 0).unwrap();
    assert_eq!(map.cells.len(), 1);
    assert_eq!(map.cells[0].status, CellStatus::ConstantReachable);
    assert!(map.cells[0].status.is_reachable());
}

#[test]
fn zero_time_target_uses_empty_field() {
    let grid = GridSpec::new(1.0, 4, 4, 10.0, ReducedState::excited()).unwrap();
    let (cost, field) =
        solve_target(&strong(), &grid, 0.0, 1.0, &OptimOptions::default(), 0).unwrap();
    assert_eq!(cost, 0.0);
    assert!(field.unwrap().is_empty());
}

#[test]
fn prescan_hits_are_sound() {
    let params = strong();
    let grid = GridSpec::new(3.0, 30, 30, 10.0, ReducedState::excited()).unwrap();
    let prescan = prescan_constant(&params, &grid).unwrap();
    let reachable: Vec<usize> = (0..grid.n_cells())
        .filter(|&i| prescan.is_constant_reachable(i))
        .collect();
    assert!(reachable.len() > 20);
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..20 {
        let i = reachable[rng.gen_range(0..reachable.len())];
        let (row, col) = (i / grid.n_t, i % grid.n_t);
        let hit = prescan.hits[i].unwrap();
        assert!(hit.omega.abs() <= grid.omega_max);
        let t = grid.cell_time(col);
        let field = ControlField::constant(hit.omega, t, 1).unwrap();
        let pop = rk4_reference(&params, &field, grid.init, 4000)
            .unwrap()
            .final_state()
            .population();
        let cost = (pop - grid.cell_pop(row)).abs();
        assert_eq!(
            classify(cost, grid.near_threshold),
            CellStatus::Reached,
            "cell ({row}, {col}) cost {cost}"
        );
    }
}

#[test]
fn prescan_contains_free_trajectory_cells() {
    let params = strong();
    let grid = GridSpec::new(3.0, 20, 50, 10.0, ReducedState::excited()).unwrap();
    let prescan = prescan_constant(&params, &grid).unwrap();
    for col in 0..grid.n_t {
        let pop = free_pop(&params, grid.cell_time(col));
        let row = ((pop * grid.n_pop as f64) as usize).min(grid.n_pop - 1);
        if (grid.cell_pop(row) - pop).abs() < 0.01 {
            assert!(prescan.is_constant_reachable(grid.index(row, col)));
        }
    }
    assert!(prescan.symmetric);
    assert_eq!(prescan.curves.len(), 2);
    assert_eq!(prescan.curves[1].omega, 10.0);
}

#[test]
fn maps_are_deterministic_across_thread_pools() {
    let grid = GridSpec::new(2.0, 6, 6, 10.0, ReducedState::excited()).unwrap();
    let opts = OptimOptions {
        max_iters: 150,
        ..map_options()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| map_reachable(&strong(), &grid, &opts, 5).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.cells, b.cells);
    for (i, c) in a.cells.iter().enumerate() {
        assert_eq!(grid.index(c.row, c.col), i);
    }
}

#[test]
fn weak_coupling_prescan_matches_analytic_band() {
    let params = SystemParams::new(0.25, 1.0).unwrap();
    let mut grid = GridSpec::new(20.0, 20, 20, 2.0, ReducedState::excited()).unwrap();
    grid.dt = 0.1;
    let prescan = prescan_constant(&params, &grid).unwrap();
    let cell = 1.0 / grid.n_pop as f64;
    for col in 0..grid.n_t {
        let t = grid.cell_time(col);
        let lower = weak_coupling_population(&params, 0.0, t);
        let upper = weak_coupling_population(&params, grid.omega_max, t);
        for row in 0..grid.n_pop {
            let target = grid.cell_pop(row);
            let inside = target > lower + cell && target < upper - cell;
            let outside = target < lower - cell || target > upper + cell;
            let hit = prescan.is_constant_reachable(grid.index(row, col));
            if inside {
                assert!(hit, "t = {t}, target {target} inside [{lower}, {upper}]");
            }
            if outside {
                assert!(!hit, "t = {t}, target {target} outside [{lower}, {upper}]");
            }
        }
    }
}

#[test]
fn reached_cells_are_confirmed_by_rk4() {
    // includes the shaped-field cells that lie above the constant ω_max trajectory
    let params = strong();
    let mut grid = GridSpec::new(3.0, 20, 20, 10.0, ReducedState::excited()).unwrap();
    grid.keep_fields = true;
    let map = map_reachable(&params, &grid, &map_options(), 1).unwrap();
    let reached: Vec<_> = map
        .cells
        .iter()
        .filter(|c| c.status == CellStatus::Reached)
        .collect();
    assert!(!reached.is_empty());
    for c in reached {
        let field = c.field.as_ref().unwrap();
        let pop = rk4_reference(&params, field, grid.init, 50)
            .unwrap()
            .final_state()
            .population();
        assert!(
            (pop - c.pop_target).abs() < 0.01,
            "cell ({}, {}): {pop} vs {}",
            c.row,
            c.col,
            c.pop_target
        );
    }
}

#[test]
fn smaller_bound_shrinks_reachable_set() {
    let params = strong();
    let count = |omega_max| {
        let grid = GridSpec::new(3.0, 15, 15, omega_max, ReducedState::excited()).unwrap();
        map_reachable(&params, &grid, &map_options(), 2)
            .unwrap()
            .cells
            .iter()
            .filter(|c| c.status.is_reachable())
            .count()
    };
    assert!(count(2.0) < count(10.0));
}
