# Copyright 2026 The mvgcn Authors.
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

"""Multi-view graph fusion and GCN node classification."""

import json

from mvgcn._core import (
    ConfigError,
    Dataset,
    Error,
    GcnModel,
    Graph,
    IoError,
    MergedGraph,
    ModifiedLaplacian,
    NumericalError,
    augment_graph,
    degree_vector,
    forward,
    load_config_dataset,
    load_dataset,
    loss_and_grads,
    manifold_rank,
    merge_views,
    normalized_laplacian,
    projection_distance_sq,
    read_edge_list,
    renormalized_propagation,
    run_experiment_json,
    save_dataset,
    spectral_embedding,
    union_views,
    write_edge_list,
)

__version__ = "0.1.0"


def run_experiment(config):
    """Runs an experiment from a config dict and returns the report as a dict."""
    return json.loads(run_experiment_json(json.dumps(config)))


__all__ = [name for name in dir() if not name.startswith("_")]
