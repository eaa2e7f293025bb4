"""cfdim: exact continued-fraction decompositions and dimension machinery.

The library splits into:

* ``cf_core``   exact expansions, convergents, comparison, cylinders
* ``decompose`` greedy sum/product decompositions with all odd-order
                partial quotients equal to 1
* ``pressure``  finite pressure sums, their unit-crossing exponents, and
                depth/base trends
* ``geometry``  admissible words, fundamental intervals, gaps, the mass
                distribution, covering weights, and nested-interval ratios
* ``dimension`` top-level dimension evaluation and the growth-rate classifier
* ``cli``       the ``cfdim`` command-line front end
"""

__version__ = "0.1.0"
