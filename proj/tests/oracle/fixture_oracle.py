#!/usr/bin/env python3
# Copyright 2026 The embed-curate Authors
# SPDX-License-Identifier: Apache-2.0
"""Independent recomputation of clip scores, selection and crops for the
fixture corpus. Usage: fixture_oracle.py FIXTURE_DIR CROPPED_JSONL"""

import json
import math
import sys
from pathlib import Path


def load(path):
    return [json.loads(l) for l in Path(path).read_text().splitlines() if l.strip()]


def main(fixtures, cropped_path):
    fixtures = Path(fixtures)
    frames = {}
    for f in load(fixtures / "detections.jsonl"):
        frames.setdefault(f["video_id"], []).append(f)
    durations = {v["video_id"]: v["duration_s"] for v in load(fixtures / "videos.jsonl")}

    scored = []
    for vid, dur in sorted(durations.items()):
        fs = sorted(frames.get(vid, []), key=lambda f: f["timestamp_s"])
        i = 0
        while i * 5.0 < dur:
            start, end = i * 5.0, min((i + 1) * 5.0, dur)
            i += 1
            if end - start < 5.0 and end - start < 1.0:
                continue
            terms, picked = [], []
            for k in range(4):
                lo = start + k * (end - start) / 4
                hi = start + (k + 1) * (end - start) / 4
                target = start + (k + 0.5) * (end - start) / 4
                cands = [f for f in fs if lo <= f["timestamp_s"] < hi]
                if not cands:
                    terms.append(0.0)
                    continue
                best = min(cands, key=lambda f: (abs(f["timestamp_s"] - target), f["timestamp_s"]))
                picked.append(best)
                hands = best["hands"]
                hoi = 1 if any(h["in_contact"] for h in hands) and best["objects"] else 0
                avg = sum(h["probability"] for h in hands) / len(hands) if hands else 0.0
                terms.append(hoi + avg)
            scored.append((sum(terms) / 4, vid, start, end, picked))

    scored.sort(key=lambda s: (-s[0], s[1], s[2], s[3]))
    top = scored[: math.floor(0.6 * len(scored) + 1e-9)]

    got = load(cropped_path)
    assert len(got) == len(top), (len(got), len(top))
    worst = 0.0
    for (score, vid, start, end, picked), rec in zip(top, got):
        clip = rec["scored"]["clip"]
        assert (clip["video_id"], clip["start_s"], clip["end_s"]) == (vid, start, end), (clip, vid, start)
        worst = max(worst, abs(rec["scored"]["hoi_score"] - score))
        boxes = [b["box"] for f in picked for b in f["hands"] + f["objects"]]
        if not boxes:
            assert "crop_region" not in rec
            continue
        x0 = min(b[0] for b in boxes); y0 = min(b[1] for b in boxes)
        x1 = max(b[2] for b in boxes); y1 = max(b[3] for b in boxes)
        mw, mh = 0.1 * (x1 - x0), 0.1 * (y1 - y0)
        want = [max(0.0, x0 - mw), max(0.0, y0 - mh), min(640.0, x1 + mw), min(360.0, y1 + mh)]
        have = rec["crop_region"]
        assert all(abs(a - b) < 1e-9 for a, b in zip(want, have)), (want, have)
    print(f"oracle agrees on {len(top)} clips; max score error {worst:.3e}")
    assert worst < 1e-12


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
