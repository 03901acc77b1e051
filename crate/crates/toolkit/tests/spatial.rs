use proptest::prelude::*;
use star_toolkit::spatial::*;
use star_toolkit::SpatialError;

fn pp(x: f64, y: f64) -> Point<f64> {
    Point::planar(x, y)
}

fn geo(lon: f64, lat: f64) -> Point<f64> {
    Point::geographic(lon, lat).unwrap()
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]` on the integer grid.
#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: i32,
    y0: i32,
    x1: i32,
    y1: i32,
}

impl Rect {
    fn polygon(self) -> Geometry<f64> {
        let (a, b, c, d) = (self.x0 as f64, self.y0 as f64, self.x1 as f64, self.y1 as f64);
        Geometry::polygon(vec![pp(a, b), pp(c, b), pp(c, d), pp(a, d), pp(a, b)]).unwrap()
    }

    fn closed(self, x: f64, y: f64) -> bool {
        self.x0 as f64 <= x && x <= self.x1 as f64 && self.y0 as f64 <= y && y <= self.y1 as f64
    }

    fn open(self, x: f64, y: f64) -> bool {
        (self.x0 as f64) < x && x < self.x1 as f64 && (self.y0 as f64) < y && y < self.y1 as f64
    }
}

fn rect() -> impl Strategy<Value = Rect> {
    (0..6i32, 0..6i32, 1..4i32, 1..4i32).prop_map(|(x0, y0, w, h)| Rect { x0, y0, x1: x0 + w, y1: y0 + h })
}

/// Sample points on a quarter-unit grid covering every rectangle used here.
fn samples() -> impl Iterator<Item = (f64, f64)> {
    (0..=40).flat_map(|i| (0..=40).map(move |j| (i as f64 * 0.25, j as f64 * 0.25)))
}

/// Point-set oracle for rectangle pairs. Interiors, closures and boundaries
/// are tested at sample points; on integer rectangles a quarter grid
/// resolves every intersection pattern.
fn rect_oracle(rel: SpatialRelation, a: Rect, b: Rect) -> bool {
    let mut ii = false; // interiors meet
    let mut cc = false; // closures meet
    let mut a_out_b = false; // closure(a) leaves closure(b)
    let mut b_out_a = false;
    for (x, y) in samples() {
        ii |= a.open(x, y) && b.open(x, y);
        cc |= a.closed(x, y) && b.closed(x, y);
        a_out_b |= a.closed(x, y) && !b.closed(x, y);
        b_out_a |= b.closed(x, y) && !a.closed(x, y);
    }
    match rel {
        SpatialRelation::Intersects => cc,
        SpatialRelation::Within => !a_out_b,
        SpatialRelation::Contains => !b_out_a,
        SpatialRelation::Equals => !a_out_b && !b_out_a,
        SpatialRelation::Touches => cc && !ii,
        SpatialRelation::Overlaps => ii && a_out_b && b_out_a,
        // same-dimension areas never cross
        SpatialRelation::Crosses => false,
    }
}

/// Ray-casting point-in-polygon, independent of the DE-9IM machinery.
fn ray_cast_inside(px: f64, py: f64, ring: &[(f64, f64)]) -> bool {
    let mut inside = false;
    for w in ring.windows(2) {
        let ((x1, y1), (x2, y2)) = (w[0], w[1]);
        if (y1 > py) != (y2 > py) {
            let xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1);
            if px < xi {
                inside = !inside;
            }
        }
    }
    inside
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn rectangle_predicates_match_sampling_oracle(a in rect(), b in rect()) {
        for rel in SpatialRelation::ALL {
            let got = spatial_predicate(rel, &a.polygon(), &b.polygon()).unwrap();
            prop_assert_eq!(got, rect_oracle(rel, a, b), "{} {:?} {:?}", rel, a, b);
        }
    }

    #[test]
    fn within_is_converse_of_contains(a in rect(), b in rect(), px in 0i32..40, py in 0i32..40) {
        let p = Geometry::point(pp(px as f64 * 0.25, py as f64 * 0.25));
        let seg = Geometry::linestring(vec![pp(a.x0 as f64, a.y0 as f64), pp(b.x1 as f64, b.y1 as f64)]).unwrap();
        let shapes = [a.polygon(), b.polygon(), p, seg];
        for g1 in &shapes {
            for g2 in &shapes {
                for rel in SpatialRelation::ALL {
                    prop_assert_eq!(
                        spatial_predicate(rel, g1, g2).unwrap(),
                        spatial_predicate(rel.converse(), g2, g1).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn point_within_matches_ray_casting(px in -1.0f64..8.0, py in -1.0f64..8.0, a in rect()) {
        let ring = [(a.x0, a.y0), (a.x1, a.y0), (a.x1, a.y1), (a.x0, a.y1), (a.x0, a.y0)]
            .map(|(x, y)| (x as f64, y as f64));
        let on_edge = a.closed(px, py) && !a.open(px, py);
        prop_assume!(!on_edge);
        let got = spatial_predicate(SpatialRelation::Within, &Geometry::point(pp(px, py)), &a.polygon()).unwrap();
        prop_assert_eq!(got, ray_cast_inside(px, py, &ring));
    }

    #[test]
    fn equals_is_reflexive(a in rect()) {
        prop_assert!(spatial_predicate(SpatialRelation::Equals, &a.polygon(), &a.polygon()).unwrap());
    }

    #[test]
    fn wedges_partition_the_circle(deg in 0.0f64..360.0) {
        // oracle: nearest center by angular distance, ties clockwise
        let dist = |c: f64| {
            let d = (deg - c).rem_euclid(360.0);
            d.min(360.0 - d)
        };
        let mut best = 0;
        for i in 1..8 {
            if dist(i as f64 * 45.0) < dist(best as f64 * 45.0) {
                best = i;
            }
        }
        let w = bearing_to_wedge(deg, WedgeRule::Symmetric);
        let on_boundary = ((deg - 22.5) / 45.0).fract() == 0.0;
        if !on_boundary {
            prop_assert_eq!(w, best as u8 + 1);
        }
        let compat = bearing_to_wedge(deg, WedgeRule::WideNorth);
        prop_assert!((1..=8).contains(&compat));
        prop_assert_eq!(compat == 1, !(33.75..326.25).contains(&deg));
    }

    #[test]
    fn haversine_metric_axioms(
        a in (-179.0f64..179.0, -89.0f64..89.0),
        b in (-179.0f64..179.0, -89.0f64..89.0),
        c in (-179.0f64..179.0, -89.0f64..89.0),
    ) {
        let (p, q, r) = (geo(a.0, a.1), geo(b.0, b.1), geo(c.0, c.1));
        let d = |x: &Point<f64>, y: &Point<f64>| haversine_distance(x, y).unwrap();
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() <= 1e-6 * (1.0 + d(&p, &q)));
        prop_assert!(d(&p, &r) <= (d(&p, &q) + d(&q, &r)) * (1.0 + 1e-6) + 1e-6);
        prop_assert_eq!(d(&p, &p), 0.0);
    }

    #[test]
    fn event_interval_endpoints_are_timestamps(
        pts in prop::collection::vec((-1.0f64..6.0, -1.0f64..6.0), 1..15),
        a in rect(),
    ) {
        let ts: Vec<f64> = (0..pts.len()).map(|i| 0.5 + 1.25 * i as f64).collect();
        let traj = TimedTrajectory::new(pts.iter().map(|(x, y)| pp(*x, *y)).collect(), ts.clone()).unwrap();
        let ev = predicate_with_event_interval(SpatialRelation::Within, &traj, &a.polygon()).unwrap();
        let hits: Vec<usize> = pts.iter().enumerate().filter(|(_, (x, y))| a.open(*x, *y)).map(|(i, _)| i).collect();
        prop_assert_eq!(ev.holds, !hits.is_empty());
        match ev.interval {
            Some(iv) => {
                prop_assert!(ts.contains(&iv.start()) && ts.contains(&iv.end()));
                prop_assert_eq!(iv.start(), ts[hits[0]]);
                prop_assert_eq!(iv.end(), ts[*hits.last().unwrap()]);
            }
            None => prop_assert!(hits.is_empty()),
        }
    }

    #[test]
    fn two_ranges_recover_circle_intersection(
        x in -50.0f64..50.0, y in -50.0f64..50.0,
        a in (-50.0f64..50.0, -50.0f64..50.0), b in (-50.0f64..50.0, -50.0f64..50.0),
    ) {
        let (ax, ay, bx, by) = (a.0, a.1, b.0, b.1);
        prop_assume!((ax - bx).hypot(ay - by) > 1.0);
        // keep the target clearly on one side of the anchor line
        let side = (bx - ax) * (y - ay) - (by - ay) * (x - ax);
        prop_assume!(side.abs() > 1.0);
        let obs = |px: f64, py: f64| Observation {
            anchor: pp(px, py),
            bearing: None,
            range: Some((x - px).hypot(y - py)),
        };
        let third = Observation { anchor: pp(x + 7.0, y - 3.0), bearing: None, range: Some(58f64.sqrt()) };
        let sol = localize(&[obs(ax, ay), obs(bx, by), third]).unwrap();
        prop_assert!((sol.point.x - x).abs() < 1e-6 && (sol.point.y - y).abs() < 1e-6);
        prop_assert!(sol.residual < 1e-6);
    }
}

#[test]
fn case_b_trajectory_is_within_polygon() {
    let traj_pts = [
        (0.0, 10.0), (0.083, 9.76), (0.17, 9.50), (0.27, 9.21), (0.37, 8.89),
        (0.49, 8.55), (0.62, 8.19), (0.76, 7.81), (0.93, 7.42), (1.11, 7.02),
    ];
    let poly = [(3.13, 9.60), (0.31, 11.29), (-2.17, 9.14), (-0.89, 6.12), (2.38, 6.40), (3.13, 9.60)];
    let ts = vec![1.577, 2.597, 3.618, 4.638, 5.659, 6.679, 7.699, 8.720, 9.740, 10.761];
    let traj = TimedTrajectory::new(traj_pts.iter().map(|(x, y)| pp(*x, *y)).collect(), ts).unwrap();
    let polygon = Geometry::polygon(poly.iter().map(|(x, y)| pp(*x, *y)).collect()).unwrap();
    let ev = predicate_with_event_interval(SpatialRelation::Within, &traj, &polygon).unwrap();
    assert!(ev.holds);
    let iv = ev.interval.unwrap();
    assert_eq!((iv.start(), iv.end()), (1.577, 10.761));
    let line = Geometry::linestring(traj.points().to_vec()).unwrap();
    assert!(spatial_predicate(SpatialRelation::Within, &line, &polygon).unwrap());
}

#[test]
fn trajectory_outside_has_no_interval() {
    let traj = TimedTrajectory::new(vec![pp(10.0, 10.0), pp(11.0, 11.0)], vec![0.0, 1.0]).unwrap();
    let sq = Rect { x0: 0, y0: 0, x1: 1, y1: 1 }.polygon();
    let ev = predicate_with_event_interval(SpatialRelation::Within, &traj, &sq).unwrap();
    assert_eq!(ev, EventInterval { holds: false, interval: None });
}

#[test]
fn single_satisfying_vertex() {
    let traj =
        TimedTrajectory::new(vec![pp(5.0, 5.0), pp(0.5, 0.5), pp(7.0, 7.0)], vec![0.0, 2.5, 4.0]).unwrap();
    let sq = Rect { x0: 0, y0: 0, x1: 1, y1: 1 }.polygon();
    let iv = predicate_with_event_interval(SpatialRelation::Within, &traj, &sq).unwrap().interval.unwrap();
    assert_eq!((iv.start(), iv.end()), (2.5, 2.5));
}

#[test]
fn point_outside_unit_square_is_not_within() {
    let sq = Rect { x0: 0, y0: 0, x1: 1, y1: 1 }.polygon();
    assert!(!spatial_predicate(SpatialRelation::Within, &Geometry::point(pp(1.5, 0.5)), &sq).unwrap());
    assert!(spatial_predicate(SpatialRelation::Within, &Geometry::point(pp(0.5, 0.5)), &sq).unwrap());
}

#[test]
fn frames_must_match() {
    let sq = Rect { x0: 0, y0: 0, x1: 1, y1: 1 }.polygon();
    let g = Geometry::point(geo(0.5, 0.5));
    assert!(spatial_predicate(SpatialRelation::Within, &g, &sq).is_err());
}

#[test]
fn case_a_bearing_maps_to_north() {
    let a = geo(120.1204, 30.8661);
    let b = geo(128.3270, 45.458311);
    let deg = compass_bearing(&a, &b).unwrap();
    // great-circle initial bearing, frozen from an independent spherical computation
    assert!((deg - 21.39).abs() < 0.01, "{deg}");
    assert_eq!(bearing_to_wedge(deg, WedgeRule::WideNorth), 1);
    assert_eq!(bearing_to_wedge(deg, WedgeRule::Symmetric), 1);
    assert_eq!(bearing_to_wedge(27.3, WedgeRule::WideNorth), 1);
}

#[test]
fn cardinal_bearings() {
    let b = |p: Point<f64>, q: Point<f64>| compass_bearing(&p, &q).unwrap();
    assert!(b(geo(5.0, 0.0), geo(5.0, 1.0)).abs() < 1e-9);
    assert!((b(geo(0.0, 0.0), geo(1.0, 0.0)) - 90.0).abs() < 1e-9);
    assert!((b(geo(0.0, 1.0), geo(0.0, 0.0)) - 180.0).abs() < 1e-9);
    assert!((b(geo(1.0, 0.0), geo(0.0, 0.0)) - 270.0).abs() < 1e-9);
    assert!(compass_bearing(&pp(0.0, 0.0), &pp(1.0, 1.0)).is_err());
}

#[test]
fn perpendicular_bearings_intersect_exactly() {
    let obs = [
        Observation { anchor: pp(0.0, 0.0), bearing: Some(45.0), range: None },
        Observation { anchor: pp(1.0, 0.0), bearing: Some(315.0), range: None },
    ];
    let sol = localize(&obs).unwrap();
    assert!((sol.point.x - 0.5).abs() < 1e-12 && (sol.point.y - 0.5).abs() < 1e-12);
}

#[test]
fn tangent_ranges_meet_at_one_point() {
    let obs = [
        Observation { anchor: pp(0.0, 0.0), bearing: None, range: Some(2.0) },
        Observation { anchor: pp(5.0, 0.0), bearing: None, range: Some(3.0) },
    ];
    let sol = localize(&obs).unwrap();
    assert!((sol.point.x - 2.0).abs() < 1e-6 && sol.point.y.abs() < 1e-6);
}

#[test]
fn two_range_closed_form() {
    // circles centered (0,0) r=5 and (8,0) r=5 meet at (4, +-3)
    let obs = [
        Observation { anchor: pp(0.0, 0.0), bearing: None, range: Some(5.0) },
        Observation { anchor: pp(8.0, 0.0), bearing: None, range: Some(5.0) },
    ];
    let sol = localize(&obs).unwrap();
    assert!((sol.point.x - 4.0).abs() < 1e-6 && (sol.point.y.abs() - 3.0).abs() < 1e-6);
}

#[test]
fn bearing_and_range() {
    let obs = [
        Observation { anchor: pp(0.0, 0.0), bearing: Some(90.0), range: None },
        Observation { anchor: pp(3.0, 4.0), bearing: None, range: Some(4.0) },
    ];
    let sol = localize(&obs).unwrap();
    assert!((sol.point.x - 3.0).abs() < 1e-6 && sol.point.y.abs() < 1e-6);
}

#[test]
fn degenerate_localization() {
    let parallel = [
        Observation { anchor: pp(0.0, 0.0), bearing: Some(30.0), range: None },
        Observation { anchor: pp(1.0, 0.0), bearing: Some(30.0), range: None },
    ];
    assert!(matches!(localize(&parallel), Err(SpatialError::NoSolution(_))));
    let concentric = [
        Observation { anchor: pp(2.0, 2.0), bearing: None, range: Some(1.0) },
        Observation { anchor: pp(2.0, 2.0), bearing: None, range: Some(3.0) },
    ];
    assert!(matches!(localize(&concentric), Err(SpatialError::NoSolution(_))));
    let single = [Observation { anchor: pp(0.0, 0.0), bearing: Some(0.0), range: Some(1.0) }];
    assert!(localize(&single).is_err());
}

#[test]
fn geographic_localization_round_trip() {
    let target = geo(-75.26, 39.94);
    let anchors = [geo(-75.30, 39.90), geo(-75.20, 39.92)];
    let obs: Vec<_> = anchors
        .iter()
        .map(|a| Observation { anchor: *a, bearing: Some(compass_bearing(a, &target).unwrap()), range: None })
        .collect();
    let sol = localize(&obs).unwrap();
    assert!(haversine_distance(&sol.point, &target).unwrap() < 50.0);
}

#[test]
fn case_c_region_match() {
    let options: Vec<String> = ["Newport, PA", "Presto, PA", "Sturgeon, PA", "Fogelsville, PA", "Lansdowne, PA"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let m = admin_region_match("East Lansdowne, Delaware County, Pennsylvania, USA", &options).unwrap();
    assert_eq!(m.index, 4);
    assert!(m.score >= 0.85);
    for (i, s) in m.scores.iter().enumerate() {
        if i != 4 {
            assert!(*s < 0.3, "option {i} scored {s}");
        }
    }
    let exact = admin_region_match("Presto, PA", &options).unwrap();
    assert_eq!((exact.index, exact.score), (1, 1.0));
    let none = admin_region_match("ζηθ", &options).unwrap();
    assert_eq!(none.score, 0.0);
    assert!(admin_region_match("x", &[]).is_err());
}

#[test]
fn f32_geometry() {
    let a = Point::<f32>::geographic(0.0, 0.0).unwrap();
    let b = Point::<f32>::geographic(1.0, 0.0).unwrap();
    let d = haversine_distance(&a, &b).unwrap();
    assert!((d - 111_195.0).abs() < 2.0);
}
