"""Zero-product preservers between matrix algebras, exactly."""
