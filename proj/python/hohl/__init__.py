# Copyright 2026 The hohl Authors
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

"""Higher-order hypergraph learning on point clouds."""

from ._hohl import (
    Error,
    InvalidArgument,
    eps_graph,
    expand_scheme,
    hypergraph_energy,
    kernel_constants,
    knn_graph,
    kp_laplacian,
    load_dataset,
    num_threads,
    pointwise_consistency,
    run_experiment,
    set_num_threads,
    solve,
)

__version__ = "0.1.0"


def predict(scores):
    """Class index of the largest score per row."""
    return scores.argmax(axis=1)
