#!/usr/bin/env python3
"""Builds data/navdata.json, the bundled ZUUU/ZUCK navigation fixture.

Coordinates are desk-scale approximations. Two reference procedures
(IDBOR-9W, GURET-8X) are solved numerically so that their encoded
meta-action traces reproduce a recorded prompt byte-for-byte.
"""
import json
import sys
from pathlib import Path

from sphere import fwd, inv

INF = 1e12


def in_bucket(b, d, bucket, margin_deg=0.5, margin_m=200.0):
    a0, a1, l0, l1 = bucket
    return a0 + margin_deg <= b < a1 - margin_deg and l0 + margin_m <= d < l1 - margin_m


def solve_trace(origin, dest, first_brg, targets, buckets):
    """Waypoints P1..Pn (Pn == dest) whose step origins sit at targets[k] from dest."""

    def rec(p, k):
        if k == len(buckets) - 1:
            b, d = inv(p, dest)
            if in_bucket(b, d, buckets[k]) and abs(d - targets[k]) < 1e-3:
                return [dest]
            return None
        a0, a1, l0, l1 = buckets[k]
        mid = (a0 + a1) / 2
        offsets = sorted(range(-20, 21), key=abs)
        cands = [first_brg] if k == 0 else [mid + (a1 - a0 - 4) / 40 * o for o in offsets]
        for b in cands:
            lo, hi = l0 + 200, min(l1, 1e6) - 200
            f = lambda l: inv(fwd(*p, b, l), dest)[1] - targets[k + 1]
            if f(lo) * f(hi) > 0:
                continue
            for _ in range(200):
                m = (lo + hi) / 2
                if f(lo) * f(m) <= 0:
                    hi = m
                else:
                    lo = m
            l = (lo + hi) / 2
            if abs(f(l)) > 1e-5:
                continue
            rest = rec(fwd(*p, b, l), k + 1)
            if rest is not None:
                return [fwd(*p, b, l)] + rest
        return None

    pts = rec(origin, 0)
    if pts is None:
        sys.exit("trace has no solution")
    return pts


def bisect_distance(origin, brg, dest, target):
    lo, hi = 0.0, 20000.0
    for _ in range(200):
        m = (lo + hi) / 2
        if inv(fwd(*origin, brg, m), dest)[1] < target:
            lo = m
        else:
            hi = m
    return fwd(*origin, brg, (lo + hi) / 2)


def wrap(a):
    return (a + 180.0) % 360.0 - 180.0


def generic_path(thr, heading, dest, first_len=8000.0):
    """Simple turn-limited path: runway-aligned first leg, then <=90 deg turns toward dest."""
    pts = [fwd(*thr, heading, first_len)]
    track = heading
    for _ in range(6):
        cur = pts[-1]
        b, d = inv(cur, dest)
        turn = wrap(b - track)
        if abs(turn) <= 90 and d <= 60000:
            pts.append(dest)
            return pts
        step = max(-90.0, min(90.0, turn))
        length = min(d, 25000.0 if abs(turn) > 45 else 45000.0)
        nxt = fwd(*cur, (track + step) % 360.0, length)
        if inv(nxt, dest)[1] < 1.0:
            pts.append(dest)
            return pts
        track = inv(cur, nxt)[0]
        pts.append(nxt)
    pts.append(dest)
    return pts


def r9(x):
    return round(x, 9)


def runway(name, pos, heading, der):
    return {"name": name, "lat": r9(pos[0]), "lon": r9(pos[1]), "heading_deg": heading, "der_elev_m": der}


def fix(name, pos):
    return {"name": name, "lat": r9(pos[0]), "lon": r9(pos[1])}


def obstacle(base, name, brg, dist, elev):
    p = fwd(*base, brg, dist)
    return {"name": name, "lat": r9(p[0]), "lon": r9(p[1]), "elev_m": elev}


def zuuu():
    t02l = (30.593333, 103.954167)
    guret = fwd(30.820674, 104.13808, 68.04, 124358.4)
    # 20L threshold placed so that its distance to GURET matches the recorded trace.
    t20l = bisect_distance(t02l, 291.8, guret, 153776.5)
    rwys = {
        "02L": (t02l, 21.8),
        "20R": (fwd(*t02l, 21.8, 3600.0), 201.8),
        "20L": (t20l, 201.8),
        "02R": (fwd(*t20l, 201.8, 3600.0), 21.8),
    }
    fixes = {
        "GURET": guret,
        "BOKIR": fwd(*t02l, 16.15, 139374.8),
        "IDBOR": fwd(*t02l, 165.0, 162529.8),
        "LUVEN": fwd(*t02l, 176.73, 134660.8),
        "MUMGO": fwd(*t02l, 236.0, 98000.0),
        "UBRAB": fwd(*t02l, 101.0, 118000.0),
    }
    obstacles = [
        obstacle(t02l, "UJ", 270.71, 48965.5, 2450.0),
        obstacle(t02l, "UK", 285.0, 62000.0, 2900.0),
        obstacle(t02l, "UL", 300.0, 55000.0, 2300.0),
        obstacle(t02l, "UM", 255.0, 58000.0, 2600.0),
        obstacle(t02l, "UN", 320.0, 72000.0, 3100.0),
        obstacle(t02l, "UP", 242.0, 76000.0, 2200.0),
        obstacle(t02l, "EM", 215.0, 132000.0, 3099.0),
        obstacle(t02l, "LQ1", 95.0, 28000.0, 1040.0),
        obstacle(t02l, "LQ2", 110.0, 24000.0, 990.0),
        obstacle(t02l, "LQ3", 75.0, 33000.0, 1010.0),
        obstacle(t02l, "LQ4", 135.0, 30000.0, 960.0),
        obstacle(t02l, "TWR1", 30.0, 7000.0, 560.0),
        obstacle(t02l, "CHM1", 5.0, 14000.0, 610.0),
        obstacle(t02l, "ANT1", 200.0, 9000.0, 590.0),
    ]
    der = 495.0
    procs = []
    idbor_targets = [162529.8, 164619.6, 170508.1, 172247.2, 144245.9, 132674.0]
    idbor_buckets = [(0, 45, 0, 10e3), (0, 45, 0, 10e3), (45, 90, 10e3, 20e3),
                     (135, 180, 20e3, 30e3), (180, 225, 10e3, 20e3), (135, 180, 50e3, INF)]
    guret_targets = [153776.5, 156593.7, 172027.2, 164116.8, 140993.8, 100634.1]
    guret_buckets = [(180, 225, 0, 10e3), (180, 225, 20e3, 30e3), (90, 135, 10e3, 20e3),
                     (0, 45, 20e3, 30e3), (0, 45, 30e3, 50e3), (45, 90, 50e3, INF)]
    solved = {
        ("02L", "IDBOR"): solve_trace(t02l, fixes["IDBOR"], 21.8, idbor_targets, idbor_buckets),
        ("20L", "GURET"): solve_trace(t20l, guret, 201.8, guret_targets, guret_buckets),
        ("02L", "GURET"): [(30.672785, 103.991117), (30.709621, 104.008689), (30.820674, 104.13808), guret],
    }
    plan = [("GURET-9W", "02L", "GURET"), ("IDBOR-9W", "02L", "IDBOR"), ("BOKIR-9W", "02L", "BOKIR"),
            ("LUVEN-9W", "02L", "LUVEN"), ("MUMGO-9W", "02L", "MUMGO"), ("UBRAB-9W", "02L", "UBRAB"),
            ("BOKIR-9Z", "02R", "BOKIR"), ("IDBOR-9Z", "02R", "IDBOR"), ("GURET-9Z", "02R", "GURET"),
            ("GURET-8X", "20L", "GURET"), ("LUVEN-8X", "20L", "LUVEN"), ("MUMGO-8X", "20L", "MUMGO"),
            ("UBRAB-8X", "20L", "UBRAB"), ("BOKIR-8Y", "20R", "BOKIR"), ("IDBOR-8Y", "20R", "IDBOR")]
    for name, rwy, dest in plan:
        thr, hdg = rwys[rwy]
        pts = solved.get((rwy, dest)) or generic_path(thr, hdg, fixes[dest])
        procs.append({"name": name, "runway": rwy, "destination": dest,
                      "waypoints": [[r9(p[0]), r9(p[1])] for p in pts]})
    return {
        "icao": "ZUUU",
        "runways": [runway(n, p, h, der) for n, (p, h) in rwys.items()],
        "fixes": [fix(n, p) for n, p in fixes.items()],
        "obstacles": obstacles,
        "procedures": procs,
    }


def zuck():
    t02l = (29.704000, 106.630000)
    t02r = (29.700500, 106.646000)
    rwys = {
        "02L": (t02l, 22.3),
        "20R": (fwd(*t02l, 22.3, 3200.0), 202.3),
        "02R": (t02r, 22.3),
        "20L": (fwd(*t02r, 22.3, 3800.0), 202.3),
    }
    fixes = {
        "GUTVI": fwd(*t02l, 40.0, 110000.0),
        "PINAB": fwd(*t02l, 300.0, 95000.0),
        "SOSLI": fwd(*t02l, 200.0, 105000.0),
        "UNRIX": fwd(*t02l, 130.0, 115000.0),
    }
    obstacles = [
        obstacle(t02l, "ZL1", 290.0, 14000.0, 700.0),
        obstacle(t02l, "ZL2", 250.0, 16000.0, 680.0),
        obstacle(t02l, "TL1", 110.0, 20000.0, 900.0),
        obstacle(t02l, "TL2", 70.0, 23000.0, 920.0),
        obstacle(t02l, "JY1", 315.0, 35000.0, 1050.0),
        obstacle(t02l, "HY1", 60.0, 60000.0, 1400.0),
        obstacle(t02l, "MS1", 15.0, 5000.0, 470.0),
    ]
    der = 416.0
    plan = [("GUTVI-2Y", "02L", "GUTVI"), ("PINAB-2Y", "02L", "PINAB"), ("SOSLI-2Y", "02L", "SOSLI"),
            ("GUTVI-1Y", "02R", "GUTVI"), ("SOSLI-1Y", "02R", "SOSLI"), ("UNRIX-1Y", "02R", "UNRIX"),
            ("PINAB-1Z", "20L", "PINAB"), ("UNRIX-1Z", "20L", "UNRIX"), ("GUTVI-3Z", "20L", "GUTVI"),
            ("PINAB-2Z", "20R", "PINAB"), ("SOSLI-2Z", "20R", "SOSLI"), ("UNRIX-2Z", "20R", "UNRIX")]
    procs = []
    for name, rwy, dest in plan:
        thr, hdg = rwys[rwy]
        pts = generic_path(thr, hdg, fixes[dest])
        procs.append({"name": name, "runway": rwy, "destination": dest,
                      "waypoints": [[r9(p[0]), r9(p[1])] for p in pts]})
    return {
        "icao": "ZUCK",
        "runways": [runway(n, p, h, der) for n, (p, h) in rwys.items()],
        "fixes": [fix(n, p) for n, p in fixes.items()],
        "obstacles": obstacles,
        "procedures": procs,
    }


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[2] / "data" / "navdata.json"
    out.write_text(json.dumps({"airports": [zuuu(), zuck()]}, indent=1) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
