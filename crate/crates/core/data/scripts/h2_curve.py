"""H2 ground-state energy, aug-cc-pVQZ full CI (CISD is exact for two electrons).

Requires pyscf. Prints R (bohr) and the total energy (hartree).
"""
import numpy as np
from pyscf import ci, gto, scf

Rs = (list(np.round(np.arange(0.2, 1.0, 0.1), 3))
      + list(np.round(np.arange(1.0, 2.5, 0.05), 3))
      + list(np.round(np.arange(2.5, 5.0, 0.25), 3))
      + [5.0, 5.5, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0])

for R in Rs:
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {R}", unit="Bohr", basis="aug-cc-pvqz", verbose=0)
    mf = scf.RHF(mol).run()
    e = ci.CISD(mf).run().e_tot
    print(f"{R} {e:.10f}", flush=True)
