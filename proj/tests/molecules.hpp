#pragma once

#include "rulegnn/layout.hpp"

namespace testing_support {

/// Ethylene with atoms numbered as in its structure diagram: H1, H2 on C5; H3, H4 on C6; C5=C6.
inline rulegnn::Molecule ethylene() {
    using rulegnn::Atom;
    using rulegnn::Bond;
    return rulegnn::make_molecule(
        {Atom::hydrogen, Atom::hydrogen, Atom::hydrogen, Atom::hydrogen, Atom::carbon, Atom::carbon},
        {{1, 5, Bond::single}, {2, 5, Bond::single}, {3, 6, Bond::single}, {4, 6, Bond::single},
         {5, 6, Bond::double_bond}});
}

/// Cyclopropenylidene: H1 on C3, H2 on C4, ring C3-C5-C4 closed by C4=C3.
inline rulegnn::Molecule cyclopropenylidene() {
    using rulegnn::Atom;
    using rulegnn::Bond;
    return rulegnn::make_molecule({Atom::hydrogen, Atom::hydrogen, Atom::carbon, Atom::carbon, Atom::carbon},
                                  {{1, 3, Bond::single}, {2, 4, Bond::single}, {3, 5, Bond::single},
                                   {5, 4, Bond::single}, {4, 3, Bond::double_bond}});
}

} // namespace testing_support
