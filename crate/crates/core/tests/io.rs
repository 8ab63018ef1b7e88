use std::path::{Path, PathBuf};

use rasternest::geometry::Point;
use rasternest::io::instance::parse_instance;
use rasternest::io::result::ResultFile;
use rasternest::io::svg::render_svg;
use rasternest::isp::{density, gcdh, SolverConfig};
use rasternest::problem::Problem;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn solved(name: &str, width: i32) -> (Problem, ResultFile) {
    let problem = Problem::new(&parse_instance(&fixture(name)).unwrap(), width).unwrap();
    let config = SolverConfig {
        width_px: width,
        time_limit: 30.0,
        max_cdh_calls: Some(100),
        ..SolverConfig::default()
    };
    let out = gcdh(&problem, &config).unwrap();
    let result = ResultFile::from_runs(&problem, &config, &[(config.seed, out)]);
    (problem, result)
}

#[test]
fn profile_fixture_keeps_arcs_and_holes() {
    let inst = parse_instance(&fixture("profile.json")).unwrap();
    assert_eq!(inst.piece_count(), 9);
    let bracket = &inst.shapes[0];
    assert_eq!(bracket.outline.arc_count(), 1);
    assert_eq!(bracket.outline.holes.len(), 1);
    let washer = &inst.shapes[1];
    assert_eq!(washer.outline.arc_count(), 2);
    assert_eq!(washer.outline.holes[0].arc_count(), 2);
    // the washer's hole really is empty after rasterization
    let p = Problem::new(&inst, 48).unwrap();
    let washer_piece = (0..p.piece_count()).find(|&i| p.shape_id(i) == "washer").unwrap();
    let class = p.class(p.class_of(washer_piece, 0));
    assert!(!class.pixels.contains_offset(Point::new(0, 0)));
}

#[test]
fn result_round_trip_is_exact() {
    let (problem, result) = solved("profile.json", 48);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    result.write(&path).unwrap();
    let back = ResultFile::read(&path).unwrap();
    assert_eq!(back, result);
    back.verify(&problem).unwrap();
    assert_eq!(back.density, density(back.placed_area, back.width_px, back.best_length));
    let area: u64 = (0..problem.piece_count())
        .map(|i| {
            let o = problem
                .piece(i)
                .variants
                .iter()
                .position(|&(d, _)| d == back.placements[i].degrees)
                .unwrap();
            problem.class(problem.class_of(i, o)).area()
        })
        .sum();
    assert_eq!(area, back.placed_area);
}

#[test]
fn verify_rejects_tampering() {
    let (problem, result) = solved("jigsaw.json", 30);
    let mut moved = result.clone();
    moved.placements[1].x = moved.placements[0].x;
    moved.placements[1].y = moved.placements[0].y;
    moved.placements[1].degrees = moved.placements[0].degrees;
    if moved.placements[1].shape == moved.placements[0].shape {
        assert!(moved.verify(&problem).is_err());
    }
    let mut dense = result.clone();
    dense.density += 1e-9;
    assert!(dense.verify(&problem).is_err());
    let mut short = result;
    short.placements.pop();
    assert!(short.verify(&problem).is_err());
}

#[test]
fn svg_cells_equal_raster_areas() {
    let (problem, result) = solved("mixed.json", 40);
    let layout = result.layout(&problem).unwrap();
    let svg = render_svg(&problem, &layout).unwrap();
    let groups: Vec<&str> = svg.split("<g ").skip(1).collect();
    assert_eq!(groups.len(), problem.piece_count());
    for (i, g) in groups.iter().enumerate() {
        let mut cells = 0;
        for r in g.split("<rect ").skip(1) {
            let attr = |name: &str| -> i64 {
                let key = format!(" {name}=\"");
                let s = &r[r.find(&key).unwrap() + key.len()..];
                s[..s.find('"').unwrap()].parse().unwrap()
            };
            cells += attr("width") * attr("height");
        }
        let class = problem.class(problem.class_of(i, layout.orientations[i]));
        assert_eq!(cells as u64, class.area(), "piece {i}");
    }
}
