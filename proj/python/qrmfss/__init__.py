# Copyright 2026 The qrmfss Authors
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


"""Finite-size scaling of the quantum Rabi model: ED and RBM engines."""

from ._qrmfss import (
    Engine,
    Phase,
    QrmfssError,
    RbmParams,
    bsa_limit,
    delta_curve,
    dhamiltonian,
    ed_energies,
    eigenvalues,
    gate_list,
    ground_state,
    hamiltonian,
    postselected_distribution,
    q_to_p,
    rabi_hamiltonian,
    rbm_amplitudes,
    rbm_energy,
    rbm_probabilities,
    rbm_train,
    run_fss,
    sample_circuit,
)

__all__ = [
    "Engine",
    "Phase",
    "QrmfssError",
    "RbmParams",
    "bsa_limit",
    "delta_curve",
    "dhamiltonian",
    "ed_energies",
    "eigenvalues",
    "gate_list",
    "ground_state",
    "hamiltonian",
    "postselected_distribution",
    "q_to_p",
    "rabi_hamiltonian",
    "rbm_amplitudes",
    "rbm_energy",
    "rbm_probabilities",
    "rbm_train",
    "run_fss",
    "sample_circuit",
]
