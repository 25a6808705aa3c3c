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

import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("MVGCN_CLI") or shutil.which("mvgcn")
    if not path:
        pytest.skip("mvgcn command-line tool not found (set MVGCN_CLI)")
    return path
