# Copyright 2026 The dpbound Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Exact privacy and accuracy bounds for discrete randomized algorithms."""

from dpbound._core import (
    Mechanism,
    above_threshold,
    from_program,
    render,
    rr,
    rrcount,
    run_command,
)

__all__ = [
    "Mechanism",
    "above_threshold",
    "from_program",
    "render",
    "rr",
    "rrcount",
    "run_command",
]
