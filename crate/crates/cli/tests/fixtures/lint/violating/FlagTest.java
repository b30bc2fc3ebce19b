package fixtures;

import static org.junit.Assert.assertTrue;

import org.junit.Test;

public class FlagTest {
    @Test
    public void testIsFalse() {
        assertTrue(Flag.parse("off").isOff());
    }
}
