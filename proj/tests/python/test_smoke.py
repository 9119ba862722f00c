# Copyright 2026 The Finetype Authors.
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


import math
import os
import pathlib

import pytest

import finetype

TAXONOMY = os.environ.get(
    "FINETYPE_TAXONOMY",
    str(pathlib.Path(__file__).resolve().parents[2] / "taxonomy" / "entity_types.txt"),
)


@pytest.fixture(scope="module")
def tax():
    return finetype.Taxonomy.load(TAXONOMY)


def test_taxonomy(tax):
    assert len(tax) == len(tax.paths)
    assert tax.max_depth == 3
    assert tax.parent("person/artist/actor") == "person/artist"
    assert tax.parent("person") is None
    assert tax.closure(["person/artist/actor"]) == [
        "person",
        "person/artist",
        "person/artist/actor",
    ]
    assert "location/city" in tax
    with pytest.raises(finetype.FinetypeError):
        tax.depth("not/a/label")


def test_marginal_inference():
    small = finetype.Taxonomy.from_paths(["a", "a/b", "c"])
    probs = {"a": 0.9, "a/b": 0.2, "c": 0.4}
    assigned, refined = finetype.infer(small, probs, "marginal", 0.5)
    # Chains {a}, {a, a/b} and {c}, each scored by the Bernoulli product.
    ka = 0.9 * 0.8 * 0.6
    kab = 0.9 * 0.2 * 0.6
    kc = 0.1 * 0.8 * 0.4
    z = ka + kab + kc
    assert math.isclose(refined["a"], (ka + kab) / z, abs_tol=1e-12)
    assert math.isclose(refined["a/b"], kab / z, abs_tol=1e-12)
    assert assigned == ["a"]


def test_pruning(tax):
    mapped = [["person", "person/political-figure", "person/athlete"]]
    assert finetype.prune(tax, mapped, sibling=True) == [["person"]]
    coarse = [[0.1, 0.1, 0.7, 0.1]]
    pruned = finetype.prune(
        tax, [["location", "organization/company"]], coarse, coarse_pruning=True
    )
    assert pruned == [["organization", "organization/company"]]


def test_features():
    assert finetype.word_shape("iPhone4S") == "aAa0A"
    assert finetype.char_trigrams("Obama") == [":ob", "oba", "bam", "ama", "ma:"]


def test_cli():
    code, out, _ = finetype.run_cli(["taxonomy", "--taxonomy", TAXONOMY, "--format", "paths"])
    assert code == 0
    assert "person/artist/actor" in out.splitlines()
    code, _, _ = finetype.run_cli(["no-such-command"])
    assert code == 2
