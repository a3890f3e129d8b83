#!/usr/bin/env python3
# Copyright (c) 2026 The hprm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/demo_lexicon.tsv.

Chinese entries cover the GB2312 level-1 characters (tone-stripped pinyin from
pypinyin); English entries are a deterministic sample of CMUdict with stress
markers removed. Requires: pip install pypinyin cmudict
"""

import argparse
import re

import cmudict
from pypinyin import Style, lazy_pinyin

# Mandarin initial confusions commonly seen in ASR output (flat/retroflex,
# n/l, f/h, r/l). Weights sum to one per source.
CONFUSIONS = [
    ("zh", "z:0.7,j:0.3"),
    ("z", "zh:0.7,j:0.3"),
    ("ch", "c:0.7,q:0.3"),
    ("c", "ch:0.7,q:0.3"),
    ("sh", "s:0.7,x:0.3"),
    ("s", "sh:0.7,x:0.3"),
    ("n", "l:1.0"),
    ("l", "n:0.8,r:0.2"),
    ("f", "h:1.0"),
    ("h", "f:1.0"),
    ("r", "l:1.0"),
    ("ing", "in:1.0"),
    ("in", "ing:1.0"),
    ("eng", "en:1.0"),
    ("en", "eng:1.0"),
    ("ang", "an:1.0"),
    ("an", "ang:1.0"),
]

EXTRA_EN = ["whisper", "paraformer", "python", "github", "iphone", "google",
            "android", "linux", "ok", "hello", "world"]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data/demo_lexicon.tsv")
    parser.add_argument("--en-words", type=int, default=5000)
    args = parser.parse_args()

    chars = []
    for hi in range(0xB0, 0xD8):
        for lo in range(0xA1, 0xFF):
            try:
                ch = bytes([hi, lo]).decode("gb2312")
            except UnicodeDecodeError:
                continue
            chars.append(ch)

    lines = ["# hprm demo lexicon: zh<TAB>char<TAB>pinyin, "
             "en<TAB>word<TAB>phones, conf<TAB>phoneme<TAB>target:weight,..."]
    for ch in chars:
        py = lazy_pinyin(ch, style=Style.NORMAL, v_to_u=False,
                         neutral_tone_with_five=False)[0]
        if not re.fullmatch(r"[a-z]+", py):
            continue
        lines.append(f"zh\t{ch}\t{py}")

    d = cmudict.dict()
    words = sorted(w for w in d if re.fullmatch(r"[a-z]{3,9}", w))
    step = max(1, len(words) // args.en_words)
    picked = words[::step][: args.en_words]
    for w in EXTRA_EN:
        if w in d and w not in picked:
            picked.append(w)
    for w in sorted(set(picked)):
        phones = [re.sub(r"\d", "", p).lower() for p in d[w][0]]
        lines.append(f"en\t{w}\t{' '.join(phones)}")

    for src, targets in CONFUSIONS:
        lines.append(f"conf\t{src}\t{targets}")

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
