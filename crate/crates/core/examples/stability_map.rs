//! Mathieu stability chart on an `(a, q)` grid, printed as a character map.

use squeezetrap::floquet::{stability_map, StabilityGrid};

fn main() -> squeezetrap::Result<()> {
    let grid = StabilityGrid { a_min: -0.5, a_max: 1.0, q_min: 0.0, q_max: 1.0, n_a: 24, n_q: 60 };
    let map = stability_map(&grid)?;
    for row in map.chunks(grid.n_q).rev() {
        let line: String = row.iter().map(|r| if r.stable { '#' } else { '.' }).collect();
        println!("a = {:+.3} {line}", row[0].params.a);
    }
    let stable = map.iter().filter(|r| r.stable).count();
    println!("{stable} of {} points stable", map.len());
    Ok(())
}
